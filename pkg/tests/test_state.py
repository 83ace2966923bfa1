"""Labels, superpositions, conditioning, and serialization."""

from fractions import Fraction as F

import pytest

from plsim import (
    Amplitude,
    ImpossibleConditionError,
    Label,
    NoExactRootError,
    SlotMismatchError,
    Superposition,
)
from helpers import after_annihilation, amp, both_arms_split, rt, state_of


class TestLabel:
    def test_canonical_slot_order(self):
        assert str(Label.of("d-", "u+")) == "u+,d-"
        assert Label.of("d-", "u+") == Label.of("u+", "d-")

    def test_register_symbols_sort_after_modes(self):
        label = Label.of("C-=0;D-=1", "u+", "d-")
        assert str(label) == "u+,d-,C-=0;D-=1"

    def test_duplicate_slot_rejected(self):
        with pytest.raises(SlotMismatchError):
            Label.of("u+", "v+")

    def test_gamma_excludes_particle_modes(self):
        with pytest.raises(SlotMismatchError):
            Label.of("γ", "u+")

    def test_parse_round_trip(self):
        label = Label.of("u+", "d-", "C-=0;D-=1")
        assert Label.parse(str(label)) == label


class TestTensor:
    def test_basis_product(self):
        product = Superposition.ket("e+").tensor(Superposition.ket("e-"))
        assert product == Superposition.ket("e+", "e-")

    def test_two_path_product_expansion(self):
        plus = state_of((("u+",), amp(d=F(1, 2))), (("v+",), amp(b=F(1, 2))))
        minus = state_of((("u-",), amp(d=F(1, 2))), (("v-",), amp(b=F(1, 2))))
        assert plus.tensor(minus) == both_arms_split()

    def test_unit_is_identity(self):
        state = after_annihilation()
        assert state.tensor(Superposition.unit()) == state
        assert Superposition.unit().tensor(state) == state

    def test_overlapping_slots_rejected(self):
        with pytest.raises(SlotMismatchError):
            Superposition.ket("u+").tensor(Superposition.ket("v+"))

    def test_gamma_counts_as_both_particle_slots(self):
        with pytest.raises(SlotMismatchError):
            Superposition.ket("γ").tensor(Superposition.ket("u+"))

    def test_norm_multiplies(self):
        left = state_of((("u+",), amp(a=F(1, 3))), (("v+",), amp(c=F(2, 3))))
        right = state_of((("u-",), amp(b=F(1, 2))))
        assert left.tensor(right).norm2() == left.norm2() * right.norm2()


class TestInnerProduct:
    def test_orthogonal_to_joint_u_paths(self):
        bra = Superposition.ket("u+", "u-")
        assert bra.inner(after_annihilation()) == Amplitude.ZERO

    def test_slot_mismatch_rejected(self):
        with pytest.raises(SlotMismatchError):
            Superposition.ket("u+").inner(after_annihilation())

    def test_self_inner_is_norm(self):
        state = after_annihilation()
        assert state.inner(state) == Amplitude.ONE
        assert state.norm2() == rt(1)

    def test_gamma_component(self):
        assert Superposition.ket("γ").inner(after_annihilation()) == amp(a=F(-1, 2))

    def test_conjugate_linear_in_bra(self):
        state = after_annihilation()
        scaled = state.scale(Amplitude.I)
        assert scaled.inner(state) == -Amplitude.I * state.inner(state)


class TestConditioning:
    def test_condition_on_dark_port_click(self):
        from helpers import electron_recombined

        projected, prob = electron_recombined().condition("electron", "d-")
        assert prob == rt(F(1, 8))
        assert projected == state_of((("u+", "d-"), amp(d=F(1, 4))))

    def test_condition_mirror_case(self):
        from helpers import positron_recombined

        projected, prob = positron_recombined().condition("positron", "d+")
        assert prob == rt(F(1, 8))
        assert projected == state_of((("d+", "u-"), amp(d=F(1, 4))))

    def test_impossible_condition(self):
        with pytest.raises(ImpossibleConditionError):
            after_annihilation().condition("positron", "d+")

    def test_probabilities_over_slot_sum_to_norm(self):
        from helpers import electron_recombined

        state = electron_recombined()
        total = rt(0)
        for value in ("c-", "d-"):
            _, prob = state.condition("electron", value)
            total = total + prob
        gamma_weight = state.amplitude(Label.of("γ")).abs2()
        assert total + gamma_weight == rt(1)


class TestRenormalize:
    def test_scale_by_inverse_root(self):
        state = state_of((("u+", "d-"), amp(d=F(1, 4))))
        renorm = state.renormalized(rt(F(1, 8)))
        assert renorm == state_of((("u+", "d-"), amp(c=1)))
        assert renorm.is_normalized()

    def test_root_outside_field(self):
        state = state_of((("u+",), amp(a=1)))
        with pytest.raises(NoExactRootError):
            state.renormalized(rt(F(1, 3)))


class TestEqualUpToPhase:
    def test_global_i_phase(self):
        state = after_annihilation()
        assert state.scale(Amplitude.I).equal_up_to_phase(state)

    def test_different_labels(self):
        a = Superposition.ket("u+", "d-")
        b = Superposition.ket("d+", "u-")
        assert not a.equal_up_to_phase(b)

    def test_non_unit_scale_rejected(self):
        state = after_annihilation()
        assert not state.scale(Amplitude.rational(2)).equal_up_to_phase(state)

    def test_half_turn_unit_phase(self):
        # (1+i)/sqrt2 is a unit of the field but not a power of i.
        lam = amp(b=F(1, 2), d=F(1, 2))
        assert lam.abs2() == rt(1)
        state = after_annihilation()
        assert state.scale(lam).equal_up_to_phase(state)


class TestJson:
    def test_round_trip_bit_exact(self):
        from helpers import minus_arm_detected

        state = minus_arm_detected()
        assert Superposition.from_json(state.to_json()) == state

    def test_labels_in_canonical_order(self):
        state = after_annihilation()
        labels = [entry["label"] for entry in state.to_json_obj()]
        assert labels == ["γ", "u+,v-", "v+,u-", "v+,v-"]

    def test_rationals_as_strings(self):
        entry = after_annihilation().to_json_obj()[0]
        assert entry["amp"] == {"a": "-1/2", "b": "0", "c": "0", "d": "0"}

    def test_spin_pair_labels_round_trip(self):
        from plsim import load_scenario, run_unitary

        epr = load_scenario("epr")
        final, _ = run_unitary(epr, epr.frames[0])
        assert Superposition.from_json(final.to_json()) == final
        labels = [entry["label"] for entry in final.to_json_obj()]
        assert labels == ["up_A,down_B,A=up,B=down", "down_A,up_B,A=down,B=up"]
