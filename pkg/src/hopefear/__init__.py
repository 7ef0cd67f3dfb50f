"""Hope and fear measurement for threaded forum corpora."""

__version__ = "0.1.0"
