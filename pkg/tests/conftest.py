import functools

import pytest

from stable_norm_lab.enumeration import enumerate_classes
from stable_norm_lab.stable_norm import build_stable_norm_table
from stable_norm_lab.surfaces import build_giraffe_genus2, build_octagon_surface


@functools.lru_cache(maxsize=None)
def octagon():
    return build_octagon_surface()


@functools.lru_cache(maxsize=None)
def giraffe(l_sep=0.1):
    return build_giraffe_genus2(l_sep)


@functools.lru_cache(maxsize=None)
def octagon_catalog(T):
    return enumerate_classes(octagon(), T)


@functools.lru_cache(maxsize=None)
def giraffe_catalog(T, l_sep=0.1):
    return enumerate_classes(giraffe(l_sep), T)


@functools.lru_cache(maxsize=None)
def octagon_table(T):
    return build_stable_norm_table(octagon_catalog(T), T)


@functools.lru_cache(maxsize=None)
def giraffe_table(T, l_sep=0.1):
    return build_stable_norm_table(giraffe_catalog(T, l_sep), T)


@pytest.fixture
def oct_surface():
    return octagon()


@pytest.fixture
def gir_surface():
    return giraffe()
