"""Unit test package for ccgmwe."""
