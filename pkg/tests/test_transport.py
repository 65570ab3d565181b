"""Transport: delivery under loss, QoS retransmission, energy and latency
accounting."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agrisim.errors import ConfigurationError, InputError
from agrisim.transport import (
    PUBSUB,
    REQRESP,
    DeliveryResult,
    EnergyModel,
    LinkModel,
    TelemetryPacket,
    TransportStats,
    energy_efficiency_pct,
    publish,
    run_session,
    season_packet_count,
)

SEASON_PACKETS = 17_280


def _packets(n):
    return [TelemetryPacket(sequence_no=i + 1, timestamp_s=300.0 * i,
                            moisture_pct=40.0, temp_c=22.0, humidity_pct=45.0)
            for i in range(n)]


class TestPacket:
    def test_wire_payload_golden(self):
        p = TelemetryPacket(sequence_no=1, timestamp_s=0.0, moisture_pct=40.25,
                            temp_c=22.04, humidity_pct=45.0)
        assert p.payload == "moisture=40.2,temp=22.0,humidity=45.0"
        assert p.payload_bytes == len(p.payload)

    def test_topic_convention(self):
        assert _packets(1)[0].topic == "farm/field-1/telemetry"


class TestPublish:
    def test_lossless_first_attempt(self):
        link = LinkModel(loss_prob=0.0)
        result = publish(_packets(1)[0], 0, link, np.random.default_rng(0))
        assert result == DeliveryResult(delivered=True, attempts=1)

    def test_qos0_delivery_rate_matches_loss(self):
        link = LinkModel(loss_prob=0.02)
        rng = np.random.default_rng(1)
        delivered = sum(publish(p, 0, link, rng).delivered
                        for p in _packets(SEASON_PACKETS))
        assert delivered / SEASON_PACKETS == pytest.approx(0.98, abs=0.005)

    def test_qos1_beats_closed_form_floor(self):
        # closed form: P(delivered) = 1 - p^(retries+1)
        link = LinkModel(loss_prob=0.02, max_retries=5)
        assert 1.0 - 0.02 ** 6 >= 0.999999
        rng = np.random.default_rng(2)
        delivered = sum(publish(p, 1, link, rng).delivered
                        for p in _packets(SEASON_PACKETS))
        assert delivered / SEASON_PACKETS >= 0.9999

    def test_invalid_qos_rejected(self):
        with pytest.raises(InputError):
            publish(_packets(1)[0], 2, LinkModel(), np.random.default_rng(0))

    @given(st.floats(0.0, 0.95), st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=1000, deadline=None)
    def test_qos1_never_below_qos0(self, loss, seed):
        # identical per-packet streams: the first attempt is shared, so QoS1
        # delivers a superset of what QoS0 delivers
        link = LinkModel(loss_prob=loss, max_retries=3)
        packet = _packets(1)[0]
        r0 = publish(packet, 0, link, np.random.default_rng(seed))
        r1 = publish(packet, 1, link, np.random.default_rng(seed))
        assert r1.delivered >= r0.delivered


class TestSession:
    def test_energy_totals_reproduce_defaults(self):
        link = LinkModel(loss_prob=0.0)
        energy = EnergyModel()
        packets = _packets(SEASON_PACKETS)
        ps = run_session(packets, PUBSUB, 0, link, energy,
                         np.random.default_rng(0))
        rr = run_session(packets, REQRESP, 0, link, energy,
                         np.random.default_rng(0))
        assert ps.energy_mwh == pytest.approx(850.0)
        assert rr.energy_mwh == pytest.approx(1000.0)
        assert ps.energy_mwh / rr.energy_mwh == pytest.approx(0.85, abs=0.01)

    def test_lossless_accounting(self):
        stats = run_session(_packets(100), PUBSUB, 0, LinkModel(loss_prob=0.0),
                            EnergyModel(), np.random.default_rng(0))
        assert stats.delivered == stats.attempted == 100
        assert stats.retransmissions == 0
        assert stats.delivery_rate == 1.0

    def test_latency_constants(self):
        link = LinkModel(loss_prob=0.0)
        ps = run_session(_packets(10), PUBSUB, 0, link, EnergyModel(),
                         np.random.default_rng(0))
        rr = run_session(_packets(10), REQRESP, 0, link, EnergyModel(),
                         np.random.default_rng(0))
        assert ps.mean_latency_s == 3.0
        assert rr.mean_latency_s == 10.0

    def test_empty_sequence_gives_zero_stats(self):
        stats = run_session([], PUBSUB, 0, LinkModel(), EnergyModel(),
                            np.random.default_rng(0))
        assert stats.attempted == stats.delivered == 0
        assert stats.energy_mwh == 0.0

    def test_on_result_sees_every_packet(self):
        seen = []
        run_session(_packets(25), PUBSUB, 0, LinkModel(loss_prob=0.5),
                    EnergyModel(), np.random.default_rng(0),
                    on_result=lambda p, r: seen.append((p.sequence_no,
                                                        r.delivered)))
        assert [s for s, _ in seen] == list(range(1, 26))

    @given(st.integers(1, 400), st.integers(1, 400))
    @settings(deadline=None)
    def test_energy_monotone_in_message_count(self, n1, n2):
        link = LinkModel(loss_prob=0.0)
        e1 = run_session(_packets(n1), PUBSUB, 0, link, EnergyModel(),
                         np.random.default_rng(0)).energy_mwh
        e2 = run_session(_packets(n2), PUBSUB, 0, link, EnergyModel(),
                         np.random.default_rng(0)).energy_mwh
        assert (e1 < e2) == (n1 < n2) or n1 == n2

    @given(st.floats(0.0, 0.5), st.integers(0, 2 ** 31 - 1))
    @settings(max_examples=200, deadline=None)
    def test_empirical_rate_within_binomial_bounds(self, loss, seed):
        n = 2000
        link = LinkModel(loss_prob=loss)
        stats = run_session(_packets(n), PUBSUB, 0, link, EnergyModel(),
                            np.random.default_rng(seed))
        assert 0.0 <= stats.delivery_rate <= 1.0
        sigma = math.sqrt(loss * (1 - loss) / n)
        assert abs(stats.delivery_rate - (1 - loss)) <= 5 * sigma + 1e-12


class TestStatsMerge:
    @given(st.lists(st.tuples(st.integers(0, 100), st.integers(0, 100),
                              st.integers(0, 20), st.integers(0, 10 ** 6),
                              st.floats(0, 100), st.floats(0, 1000)),
                    min_size=1, max_size=6))
    @settings(deadline=None)
    def test_merge_order_independent(self, parts):
        chunks = [TransportStats(attempted=a + d, delivered=d,
                                 retransmissions=r, bytes_sent=b,
                                 energy_mwh=e, latency_sum_s=lat)
                  for a, d, r, b, e, lat in parts]
        forward = chunks[0]
        for c in chunks[1:]:
            forward = forward.merge(c)
        backward = chunks[-1]
        for c in reversed(chunks[:-1]):
            backward = backward.merge(c)
        assert forward.attempted == backward.attempted
        assert forward.delivered == backward.delivered
        assert forward.energy_mwh == pytest.approx(backward.energy_mwh)
        assert forward.latency_sum_s == pytest.approx(backward.latency_sum_s)

    def test_delivered_bounded_by_attempts(self):
        stats = run_session(_packets(500), PUBSUB, 1,
                            LinkModel(loss_prob=0.3, max_retries=4),
                            EnergyModel(), np.random.default_rng(0))
        assert stats.delivered <= stats.attempted + stats.retransmissions


class TestPacketCount:
    def test_season_arithmetic(self):
        assert season_packet_count(60, 300) == 17_280

    def test_single_daily_packet(self):
        assert season_packet_count(1, 86_400) == 1

    def test_zero_days_rejected(self):
        with pytest.raises(InputError):
            season_packet_count(0, 300)

    def test_non_dividing_interval_rejected(self):
        with pytest.raises(ConfigurationError):
            season_packet_count(10, 7)


class TestEnergyEfficiency:
    def test_lossless_no_idle_is_100(self):
        assert energy_efficiency_pct(850.0, 850.0) == 100.0

    def test_all_lost_is_zero(self):
        assert energy_efficiency_pct(0.0, 850.0) == 0.0

    def test_default_scenario_exceeds_95(self):
        link = LinkModel(loss_prob=0.02)
        energy = EnergyModel()
        stats = run_session(_packets(SEASON_PACKETS), PUBSUB, 0, link, energy,
                            np.random.default_rng(0), days=60)
        useful = stats.delivered * energy.energy_per_message_mwh[PUBSUB]
        assert energy_efficiency_pct(useful, stats.energy_mwh) >= 95.0

    def test_zero_total_rejected(self):
        with pytest.raises(InputError):
            energy_efficiency_pct(1.0, 0.0)
