"""Deterministic desk-scale simulator for an IoT smart-irrigation pipeline:
synthetic field sensing, lossy low-bandwidth telemetry, channel ingestion,
crop-water-requirement irrigation decisions, bilingual farmer alerts, and a
validation-metrics engine."""

__version__ = "0.1.0"
