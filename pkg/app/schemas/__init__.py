"""Pydantic schemas for the capacity toolkit."""
