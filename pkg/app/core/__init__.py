"""Core configuration and error types for the capacity toolkit."""
