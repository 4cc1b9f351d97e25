import numpy as np
import pytest

from qwit.bell import (
    CONVENTIONAL_IDENTITY_FACTOR,
    BellSetting,
    audit_many,
    bell_operator,
    chsh_operator,
    chsh_xy,
    haar_unitary,
    identity_audit,
    lhv_chsh_bound,
    random_dichotomic,
)
from qwit.operators import SIGMA_X, SIGMA_Z, QwitError, eigvalsh, is_psd


def test_lhv_bound_is_two():
    lhv = lhv_chsh_bound()
    assert lhv.bound == 2
    assert len(lhv.values) == 16
    assert lhv.positivity_holds


@pytest.mark.parametrize("sign", [1, -1])
def test_tsirelson(sign):
    s = BellSetting.tsirelson(sign)
    assert eigvalsh(bell_operator(s))[0] == pytest.approx(2 - 2 * np.sqrt(2), abs=1e-10)
    assert np.max(np.abs(eigvalsh(chsh_operator(s)))) == pytest.approx(2 * np.sqrt(2), abs=1e-12)


def test_xy_psd_on_random_settings():
    for idx in range(100):
        X, Y = chsh_xy(BellSetting.random([20091030, idx]))
        assert is_psd(X) and is_psd(Y)


def test_identity_factor_is_four_not_the_conventional_two():
    for setting in (BellSetting.tsirelson(), BellSetting.random(3), BellSetting.random(4, dim=3, sign=1)):
        audit = identity_audit(setting)
        assert audit.k_star == 4
        assert audit.residuals[4] < 1e-12
        assert not audit.matches_conventional
    assert CONVENTIONAL_IDENTITY_FACTOR == 2


@pytest.mark.parametrize("dim", [2, 3])
def test_audit_many(dim):
    res = audit_many(30, dim=dim, master_seed=1)
    assert res["k_star"] == 4 and res["k_values"] == [4]
    assert res["max_residual"] <= 1e-10
    assert res["xy_psd"]


def test_commuting_parties_keep_bell_positive():
    s = BellSetting(SIGMA_Z, SIGMA_Z, SIGMA_Z, -SIGMA_Z)
    assert eigvalsh(bell_operator(s))[0] >= -1e-12
    assert np.allclose(identity_audit(s).residuals[4], 0)


def test_random_dichotomic(rng):
    for dim in (1, 2, 3, 4):
        O = random_dichotomic(dim, rng, mixed=True)
        assert np.allclose(O @ O, np.eye(dim), atol=1e-12)
        if dim >= 2:
            w = eigvalsh(O)
            assert w[0] < 0 < w[-1]
    U = haar_unitary(3, rng)
    assert np.allclose(U.conj().T @ U, np.eye(3), atol=1e-12)


def test_setting_validation():
    with pytest.raises(QwitError, match="dichotomic"):
        BellSetting(SIGMA_Z, 2 * SIGMA_X, SIGMA_Z, SIGMA_X)
    with pytest.raises(QwitError):
        BellSetting(SIGMA_Z, SIGMA_X, SIGMA_Z, SIGMA_X, sign=0)


def test_random_setting_is_reproducible():
    a, b = BellSetting.random([5, 1]), BellSetting.random([5, 1])
    assert np.array_equal(a.A1, b.A1) and np.array_equal(a.B2, b.B2)
