import json
import math

import numpy as np
import pytest

from wiretap.mi import (
    BUILTIN_ALPHABETS,
    Alphabet,
    MiEvaluator,
    bpsk,
    load_alphabet,
    mutual_info_mc,
    psk8,
    qam16,
    qpsk,
)
from wiretap.model import ModelError, RateUnachievableError


class TestAlphabets:
    @pytest.mark.parametrize("name", sorted(BUILTIN_ALPHABETS))
    def test_builtins_normalized(self, name):
        alph = BUILTIN_ALPHABETS[name]()
        assert abs(np.mean(alph.symbols)) < 1e-12
        assert np.mean(np.abs(alph.symbols) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_sizes(self):
        assert bpsk().M == 2 and qpsk().M == 4 and psk8().M == 8 and qam16().M == 16

    def test_rejects_nonzero_mean(self):
        with pytest.raises(ModelError):
            Alphabet(np.array([0.0 + 0j, 2.0]))

    def test_rejects_duplicates(self):
        with pytest.raises(ModelError):
            Alphabet(np.array([1.0, 1.0, -1.0, -1.0]))

    def test_rejects_singleton(self):
        with pytest.raises(ModelError):
            Alphabet(np.array([1.0]))

    def test_load_from_pairs_normalizes_with_warning(self):
        with pytest.warns(UserWarning):
            alph = load_alphabet([[2.0, 0.0], [-1.0, 0.0]])
        assert abs(np.mean(alph.symbols)) < 1e-12
        assert np.mean(np.abs(alph.symbols) ** 2) == pytest.approx(1.0, abs=1e-12)

    def test_load_from_file(self, tmp_path):
        path = tmp_path / "alphabet.json"
        path.write_text(json.dumps([[1.0, 0.0], [-1.0, 0.0]]))
        alph = load_alphabet(str(path))
        assert alph.M == 2

    def test_load_builtin_by_name(self):
        assert load_alphabet("qpsk").M == 4


class TestMutualInfo:
    def test_quadrature_reproduces_unit_mass(self):
        ev = MiEvaluator(qpsk())
        assert ev.quadrature_unit_mass() == pytest.approx(1.0, abs=1e-10)

    def test_zero_snr_gives_zero_bits(self):
        for make in (bpsk, qpsk, psk8, qam16):
            assert MiEvaluator(make())(0.0) == 0.0

    def test_bpsk_saturates(self):
        assert MiEvaluator(bpsk())(100.0) == pytest.approx(1.0, abs=1e-6)

    def test_bpsk_unit_snr_against_monte_carlo(self):
        ev = MiEvaluator(bpsk())
        oracle = mutual_info_mc(bpsk(), 1.0, draws=10**6, seed=42)
        assert ev(1.0) == pytest.approx(oracle, abs=1e-3)

    def test_rejects_negative_snr(self):
        with pytest.raises(ModelError):
            MiEvaluator(bpsk())(-0.5)

    def test_gaussian_capacity_upper_bound(self):
        ev = MiEvaluator(qam16())
        for rho in (0.1, 0.5, 1.0, 3.0, 10.0, 30.0):
            assert ev(rho) <= math.log2(1.0 + rho) + 1e-9
            assert 0.0 <= ev(rho) <= math.log2(16)

    def test_monotone_and_concave_on_grid(self):
        ev = MiEvaluator(qpsk())
        grid = np.linspace(0.0, 20.0, 100)
        vals = np.array([ev(float(g)) for g in grid])
        assert np.all(np.diff(vals) > 0)
        second = np.diff(vals, 2)
        assert np.all(second <= 1e-9)


class TestInverse:
    def test_zero_rate(self):
        assert MiEvaluator(bpsk()).inverse(0.0) == 0.0

    @pytest.mark.parametrize("make", [bpsk, qpsk])
    def test_round_trip(self, make):
        ev = MiEvaluator(make())
        for frac in (0.1, 0.5, 0.9):
            rate = frac * ev.max_rate if frac != 0.1 else 0.1
            rho = ev.inverse(rate)
            assert ev(rho) == pytest.approx(rate, abs=1e-8)

    def test_bpsk_against_tabulation_oracle(self):
        ev = MiEvaluator(bpsk())
        grid = np.geomspace(1e-3, 1e3, 4001)
        vals = np.array([ev(float(g)) for g in grid])
        oracle = float(np.interp(0.5, vals, grid))
        assert ev.inverse(0.5) == pytest.approx(oracle, rel=1e-3)

    def test_rate_at_capacity_rejected(self):
        with pytest.raises(RateUnachievableError):
            MiEvaluator(qpsk()).inverse(2.0)

    def test_negative_rate_rejected(self):
        with pytest.raises(ModelError):
            MiEvaluator(qpsk()).inverse(-0.1)


def test_quadrature_matches_monte_carlo_across_snr():
    for make in (bpsk, qpsk):
        alph = make()
        ev = MiEvaluator(alph)
        for i, rho in enumerate((0.1, 1.0, 5.0, 20.0)):
            oracle = mutual_info_mc(alph, rho, draws=200_000, seed=90 + i)
            assert ev(rho) == pytest.approx(oracle, abs=2e-3)
