"""Protein-backbone invariants: TRIN, BRI, BRAIN, mirror, reconstruction."""

from __future__ import annotations


import numpy as np
import pytest

from conftest import random_rotation
from geoinv.backbone import (
    Backbone,
    brain,
    bri,
    bri_dist,
    lipschitz_lambda,
    mirror_backbone,
    mirror_bri,
    read_tsv,
    reconstruct,
    subchain,
    trin,
    write_ppm,
    write_tsv,
)


def random_chain(rng, m):
    atoms = np.zeros((m, 3, 3))
    pos = np.zeros(3)
    for i in range(m):
        a = pos
        n = a + rng.normal(size=3)
        c = a + rng.normal(size=3)
        while np.linalg.norm(np.cross(n - a, c - a)) < 1e-2:
            c = a + rng.normal(size=3)
        atoms[i] = (n, a, c)
        pos = c + rng.normal(size=3) * 0.5 + np.array([2.0, 0, 0])
    return Backbone(atoms)


def test_trin_golden():
    S = Backbone(np.array([[[0, 0, 0], [1.5, 0, 0], [2, 1, 0]]], float))
    assert trin(S) == pytest.approx(np.array([[1.5, -0.5, 1.0]]), abs=1e-12)


def test_trin_mirror_blind(rng):
    S = random_chain(rng, 4)
    assert trin(mirror_backbone(S)) == pytest.approx(trin(S), abs=1e-12)


def test_collinear_residue_rejected():
    with pytest.raises(ValueError):
        Backbone(np.array([[[0, 0, 0], [1, 0, 0], [2, 0, 0]]], float))


def test_bri_rigid_invariance(rng):
    for _ in range(20):
        S = random_chain(rng, int(rng.integers(2, 12)))
        Rm = random_rotation(rng, 3)
        moved = Backbone(S.atoms @ Rm.T + rng.normal(size=3))
        assert bri_dist(S, moved) < 1e-9


def test_bri_single_residue_row():
    S = Backbone(np.array([[[0, 0, 0], [1.5, 0, 0], [2, 1, 0]]], float))
    b = bri(S)
    assert b.shape == (1, 9)
    assert b[0] == pytest.approx([1.5, -0.5, 1.0, 0, 0, 0, 0, 0, 0], abs=1e-12)


def test_mirror_rule(rng):
    S = random_chain(rng, 6)
    b = bri(S)
    bm = bri(mirror_backbone(S))
    assert bm == pytest.approx(mirror_bri(b), abs=1e-9)
    # only columns 3, 6, 9 of rows >= 2 differ
    mask = np.zeros_like(b, dtype=bool)
    mask[1:, [2, 5, 8]] = True
    assert np.abs((b - bm)[~mask]).max() < 1e-9


def test_mirror_distance_is_twice_max_z(rng):
    S = random_chain(rng, 5)
    b = bri(S)
    assert bri_dist(b, mirror_bri(b)) == pytest.approx(
        2 * np.abs(b[1:, [2, 5, 8]]).max(), abs=1e-12
    )


def test_planar_chain_equals_mirror():
    atoms = np.array(
        [
            [[0, 0, 0], [1.5, 0, 0], [2, 1, 0]],
            [[3, 1, 0], [4, 0.5, 0], [5, 1.5, 0]],
        ],
        float,
    )
    S = Backbone(atoms)
    assert bri_dist(S, mirror_backbone(S)) < 1e-12


def test_reconstruct_round_trip(rng):
    for _ in range(10):
        S = random_chain(rng, int(rng.integers(2, 15)))
        b = bri(S)
        assert np.abs(bri(reconstruct(b)) - b).max() < 1e-9


def test_subchain_matches_geometry(rng):
    S = random_chain(rng, 10)
    b = bri(S)
    for i, j in ((1, 4), (3, 5), (6, 5), (10, 1)):
        sub = subchain(b, i, j)
        geo = bri(Backbone(S.atoms[i - 1 : i - 1 + j]))
        assert np.abs(sub - geo).max() < 1e-9
        # reused rows are bit-equal
        assert np.array_equal(sub[1:], b[i : i + j - 1])
    assert np.array_equal(subchain(b, 1, 4), b[:4])


def test_brain_filter_bound(rng):
    for _ in range(50):
        m = int(rng.integers(2, 10))
        S, Q = random_chain(rng, m), random_chain(rng, m)
        assert np.abs(brain(S) - brain(Q)).max() <= bri_dist(S, Q) + 1e-12


def test_bri_lipschitz(rng):
    for _ in range(20):
        S = random_chain(rng, int(rng.integers(2, 8)))
        eps = 10 ** rng.uniform(-6, -3)
        noise = rng.uniform(-1, 1, size=S.atoms.shape)
        noise *= eps / np.linalg.norm(noise, axis=2, keepdims=True)
        Q = Backbone(S.atoms + noise)
        lam = lipschitz_lambda(S, Q)
        assert bri_dist(S, Q) <= lam * eps + 1e-12


def test_tsv_round_trip(tmp_path, rng):
    S = random_chain(rng, 5)
    path = tmp_path / "chain.tsv"
    write_tsv(path, S)
    T = read_tsv(path)
    assert np.abs(T.atoms - S.atoms).max() < 1e-9


def test_ppm_export(tmp_path, rng):
    S = random_chain(rng, 4)
    path = tmp_path / "bri.ppm"
    write_ppm(path, bri(S))
    text = path.read_text().split()
    assert text[0] == "P3"
    assert int(text[1]) == 4 and int(text[2]) == 3
    vals = list(map(int, text[4:]))
    assert len(vals) == 4 * 3 * 3
    assert all(0 <= v <= 255 for v in vals)
