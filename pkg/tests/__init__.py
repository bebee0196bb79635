"""Test package for wofzfourier."""
