"""Probabilistic air-quality forecasting pipeline.

Modules:
    timegrid   -- calendar arithmetic, day-type classification, activity features
    dataset    -- spatiotemporal frames, ingestion, wrangling, synthetic data
    impute     -- gap filling (trigonometric, PMM, dynamic regression)
    nned       -- spatially-agnostic causal convolutional forecaster
    chain      -- per-station day-type percentile correction chain
    jointdist  -- marginal transforms, correlated simulation, event probabilities
    evaluate   -- metrics, persistence baseline, report emission
    cli        -- pipeline orchestration
"""

__version__ = "0.1.0"
