from holdring.main import main  # noqa: F401

__version__ = "1.0.0"
__all__ = ["main"]
