"""Version stamp carried by every JSON document this package emits."""

SPEC_VERSION = "1.0"
