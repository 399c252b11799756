"""Shared fixtures: figure-preset profiles are expensive, so they are built once per session."""

import functools

import pytest

from nrt_waves import density


class FigureCache:
    """Lazily computed lifted and closed profiles per figure preset."""

    @functools.lru_cache(maxsize=None)
    def lifted(self, name):
        return density.figure_preset(name).lifted()

    @functools.lru_cache(maxsize=None)
    def closed(self, name):
        return density.figure_preset(name).closed()

    @functools.lru_cache(maxsize=None)
    def normalized(self, name):
        return density.normalize(self.lifted(name))


@pytest.fixture(scope="session")
def figures():
    return FigureCache()
