"""Multi-target generative workflow: a SMILES VAE inside a two-level active-learning loop."""

__version__ = "0.1.0"
