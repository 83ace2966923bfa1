"""Shared frozen oracles for the test suite.

Every expected state below was obtained by hand expansion of the exact
splitter maps over Q(sqrt2, i); the amplitude quadruples (a, b, c, d) encode
a + b*sqrt2 + (c + d*sqrt2)*i.  For example i/(2*sqrt2) = (sqrt2/4)*i is
(0, 0, 0, 1/4) and -1/(2*sqrt2) = -sqrt2/4 is (0, -1/4, 0, 0).
"""

from fractions import Fraction as F

from plsim import Amplitude, Label, RootTwo, Superposition


def amp(a=0, b=0, c=0, d=0) -> Amplitude:
    return Amplitude.of(a, b, c, d)


def rt(x, y=0) -> RootTwo:
    return RootTwo.of(F(x), F(y))


def state_of(*terms) -> Superposition:
    return Superposition({Label.of(*symbols): amplitude for symbols, amplitude in terms})


# |e+>|e-> after both first splitters: (-|u+,u-> + i|u+,v-> + i|v+,u-> + |v+,v->)/2
def both_arms_split() -> Superposition:
    return state_of(
        (("u+", "u-"), amp(a=F(-1, 2))),
        (("u+", "v-"), amp(c=F(1, 2))),
        (("v+", "u-"), amp(c=F(1, 2))),
        (("v+", "v-"), amp(a=F(1, 2))),
    )


# ... then with the joint u-path relabeled to γ.
def after_annihilation() -> Superposition:
    return state_of(
        (("γ",), amp(a=F(-1, 2))),
        (("u+", "v-"), amp(c=F(1, 2))),
        (("v+", "u-"), amp(c=F(1, 2))),
        (("v+", "v-"), amp(a=F(1, 2))),
    )


# ... electron arm recombined: (1/2)(-γ - u+c-/√2 + i·u+d-/√2 + i√2·v+c-),
# the v+,d- amplitude cancels exactly.
def electron_recombined() -> Superposition:
    return state_of(
        (("γ",), amp(a=F(-1, 2))),
        (("u+", "c-"), amp(b=F(-1, 4))),
        (("u+", "d-"), amp(d=F(1, 4))),
        (("v+", "c-"), amp(d=F(1, 2))),
    )


def positron_recombined() -> Superposition:
    return state_of(
        (("γ",), amp(a=F(-1, 2))),
        (("c+", "u-"), amp(b=F(-1, 4))),
        (("d+", "u-"), amp(d=F(1, 4))),
        (("c+", "v-"), amp(d=F(1, 2))),
    )


# electron_recombined with the minus-arm detector bank entangled in.
def minus_arm_detected() -> Superposition:
    return state_of(
        (("γ", "C-=0;D-=0"), amp(a=F(-1, 2))),
        (("u+", "c-", "C-=1;D-=0"), amp(b=F(-1, 4))),
        (("u+", "d-", "C-=0;D-=1"), amp(d=F(1, 4))),
        (("v+", "c-", "C-=1;D-=0"), amp(d=F(1, 2))),
    )


def plus_arm_detected() -> Superposition:
    return state_of(
        (("γ", "C+=0;D+=0"), amp(a=F(-1, 2))),
        (("c+", "u-", "C+=1;D+=0"), amp(b=F(-1, 4))),
        (("d+", "u-", "C+=0;D+=1"), amp(d=F(1, 4))),
        (("c+", "v-", "C+=1;D+=0"), amp(d=F(1, 2))),
    )


# Single photon split over two detected paths: (|1>|1_m> + |2>|2_m>)/√2.
def photon_paths_detected() -> Superposition:
    return state_of(
        (("1", "D1=1;D2=0"), amp(b=F(1, 2))),
        (("2", "D1=0;D2=1"), amp(b=F(1, 2))),
    )


def hardy_final_state() -> Superposition:
    return state_of(
        (("γ", "C+=0;D+=0", "C-=0;D-=0"), amp(a=F(-1, 2))),
        (("c+", "c-", "C+=1;D+=0", "C-=1;D-=0"), amp(a=F(-3, 4))),
        (("c+", "d-", "C+=1;D+=0", "C-=0;D-=1"), amp(c=F(1, 4))),
        (("d+", "c-", "C+=0;D+=1", "C-=1;D-=0"), amp(c=F(1, 4))),
        (("d+", "d-", "C+=0;D+=1", "C-=0;D-=1"), amp(a=F(-1, 4))),
    )


HARDY_TABLE = {
    "γ": rt(F(1, 4)),
    "c+c-": rt(F(9, 16)),
    "c+d-": rt(F(1, 16)),
    "d+c-": rt(F(1, 16)),
    "d+d-": rt(F(1, 16)),
}
