"""Shared fixtures and small statistical helpers for the test suite."""

import numpy as np
import pytest
from scipy import stats

from signed_measures import Atom, BorelSet, SignedAtomicMeasure, StepDensity
from signed_measures.rng import RngStream


@pytest.fixture
def rng():
    return RngStream(20260826)


def set_grid(n=50, lo=0.0, hi=1.0, seed=7):
    """Deterministic family of n Borel sets: intervals plus two-piece unions."""
    g = np.random.default_rng(seed)
    sets = []
    while len(sets) < n:
        pts = np.sort(g.uniform(lo, hi, size=4))
        if len(sets) % 3 == 2:
            sets.append(BorelSet([(pts[0], pts[1]), (pts[2], pts[3])]))
        else:
            sets.append(BorelSet.interval(pts[0], pts[3]))
    return sets


def random_atomic(g, n_atoms=None, with_diffuse=False):
    """A random signed atomic measure on [0,1) (locations distinct a.s.)."""
    if n_atoms is None:
        n_atoms = int(g.integers(0, 8))
    atoms = [
        Atom(float(g.uniform(0, 1)), float(g.normal(0, 2)) or 1.0)
        for _ in range(n_atoms)
    ]
    diffuse = None
    if with_diffuse:
        levels = tuple(float(v) for v in g.normal(0, 1, size=3))
        diffuse = StepDensity((0.0, 0.25, 0.6, 1.0), levels)
    return SignedAtomicMeasure(atoms, diffuse)


def chi2_gof(samples, pmf, min_expected=5.0):
    """Chi-square goodness of fit of integer samples against an exact pmf.

    Bins the observed range, merges cells until every expected count is at
    least min_expected, and returns the p-value.
    """
    samples = np.asarray(samples, dtype=int)
    n = len(samples)
    ks = np.arange(samples.min(), samples.max() + 1)
    observed = np.array([(samples == k).sum() for k in ks], dtype=float)
    expected = np.array([pmf(int(k)) * n for k in ks])
    # fold everything outside the observed range into the edge cells
    lo_tail = sum(pmf(k) for k in range(int(ks[0]) - 200, int(ks[0]))) * n
    hi_tail = sum(pmf(k) for k in range(int(ks[-1]) + 1, int(ks[-1]) + 201)) * n
    expected[0] += lo_tail
    expected[-1] += hi_tail

    merged_obs, merged_exp = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(observed, expected):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            merged_obs.append(acc_o)
            merged_exp.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0:
        merged_obs[-1] += acc_o
        merged_exp[-1] += acc_e
    merged_exp = np.array(merged_exp)
    merged_obs = np.array(merged_obs)
    merged_exp *= merged_obs.sum() / merged_exp.sum()
    if len(merged_obs) < 2:
        return 1.0
    stat, p = stats.chisquare(merged_obs, merged_exp)
    return p
