"""Exact field arithmetic in Q(sqrt2, i)."""

from fractions import Fraction as F

import pytest

from plsim import Amplitude, NoExactRootError, RootTwo
from helpers import amp, rt


class TestRootTwo:
    def test_multiplication(self):
        assert rt(0, 1) * rt(0, 1) == rt(2)
        assert rt(1, 1) * rt(1, -1) == rt(-1)
        assert RootTwo.INV_SQRT2 * RootTwo.INV_SQRT2 == rt(F(1, 2))

    def test_inverse(self):
        x = rt(F(3, 5), F(-2, 7))
        assert x * x.inverse() == rt(1)
        with pytest.raises(ZeroDivisionError):
            rt(0).inverse()

    def test_sign(self):
        assert rt(1, -1).sign() == -1  # 1 - sqrt2 < 0
        assert rt(-1, 1).sign() == 1
        assert rt(3, -2).sign() == 1  # 3 - 2*sqrt2 > 0
        assert rt(0).sign() == 0

    def test_sqrt_rational_cases(self):
        assert rt(F(1, 8)).sqrt() == rt(0, F(1, 4))
        assert rt(F(9, 16)).sqrt() == rt(F(3, 4))
        assert rt(F(1, 2)).sqrt() == rt(0, F(1, 2))
        assert rt(2).sqrt() == rt(0, 1)

    def test_sqrt_mixed_case(self):
        assert rt(3, 2).sqrt() == rt(1, 1)  # (1 + sqrt2)^2 = 3 + 2*sqrt2

    def test_sqrt_outside_field(self):
        with pytest.raises(NoExactRootError):
            rt(F(1, 3)).sqrt()
        with pytest.raises(NoExactRootError):
            rt(-1).sqrt()

    def test_str(self):
        assert str(rt(F(1, 2))) == "1/2"
        assert str(rt(0, F(-1, 4))) == "-1/4·√2"
        assert str(rt(F(1, 2), F(1, 4))) == "1/2 + 1/4·√2"
        assert str(rt(0)) == "0"


class TestAmplitude:
    def test_inv_sqrt2_squares_to_half(self):
        assert Amplitude.INV_SQRT2 * Amplitude.INV_SQRT2 == amp(a=F(1, 2))

    def test_i_squared(self):
        assert Amplitude.I * Amplitude.I == amp(a=-1)

    def test_conjugate_product_is_squared_modulus(self):
        # i/(2*sqrt2) has squared modulus exactly 1/8.
        x = amp(d=F(1, 4))
        assert x.conj() * x == amp(a=F(1, 8))
        assert x.abs2() == rt(F(1, 8))

    def test_product_with_conjugate_is_real(self):
        x = amp(F(2, 3), F(-1, 5), F(1, 7), F(4, 9))
        assert (x * x.conj()).im.is_zero()

    def test_division(self):
        x = amp(F(1, 2), F(1, 3), F(-2, 5), 1)
        y = amp(0, F(1, 2), F(3, 4), F(-1, 6))
        assert (x / y) * y == x
        with pytest.raises(ZeroDivisionError):
            x / Amplitude.ZERO

    def test_abcd_fields(self):
        x = amp(F(1, 2), F(-1, 4), 3, F(2, 7))
        assert (x.a, x.b, x.c, x.d) == (F(1, 2), F(-1, 4), F(3), F(2, 7))

    def test_str(self):
        assert str(amp(a=F(-1, 2))) == "-1/2"
        assert str(amp(c=1)) == "i"
        assert str(amp(d=F(1, 4))) == "1/4·√2·i"
        assert str(amp(a=F(1, 2), c=F(-1, 2))) == "1/2 - 1/2·i"
        assert str(Amplitude.ZERO) == "0"
