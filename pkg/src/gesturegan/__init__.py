"""GAN-based synthesis and quality evaluation for wearable gesture time series.

The package covers the full experimental workflow: deterministic signal
preprocessing (filtering, windowing, scaling, splits), two generative model
families (a latent-space GAN with a learned autoencoder and a batched
Wasserstein GAN with per-instance auto-normalization), a suite of quality
metrics (statistical distance, MMD, discriminative score, privacy,
TRTS/TSTR transfer), and a CLI harness that persists datasets, checkpoints,
metric reports and figures.
"""

__version__ = "0.1.0"
