"""parguard: transient synthesis, detection and classification for
phase angle regulator differential protection."""

__version__ = "0.1.0"
