"""Tests for js-interaction-detector."""
