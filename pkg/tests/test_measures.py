import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import infobalance as ib
from conftest import haar_unitary, qstate, random_density, random_state, realize_povm


def labeled(names_dims, matrix):
    return ib.LabeledState([ib.Subsystem(n, d) for n, d in names_dims], matrix)


def classically_correlated():
    m = np.zeros((4, 4))
    m[0, 0] = m[3, 3] = 0.5
    return labeled([("A", 2), ("B", 2)], m)


def bell_pair():
    phi = np.zeros(4)
    phi[0] = phi[3] = 1 / np.sqrt(2)
    return labeled([("A", 2), ("B", 2)], np.outer(phi, phi))


H2_09 = -(0.9 * np.log2(0.9) + 0.1 * np.log2(0.1))  # entropy of diag(0.9, 0.1)


class TestMutualInformation:
    def test_product_state(self):
        rng = np.random.default_rng(0)
        s = ib.tensor_product(random_state(rng, 2, name="A"), random_state(rng, 3, name="B"))
        assert ib.mutual_information(s, ["A"], ["B"]) == pytest.approx(0.0, abs=1e-9)

    def test_bell_pair(self):
        assert ib.mutual_information(bell_pair(), ["A"], ["B"]) == pytest.approx(2.0, abs=1e-9)

    def test_classically_correlated(self):
        assert ib.mutual_information(classically_correlated(), ["A"], ["B"]) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_overlap_rejected(self):
        with pytest.raises(ib.LabelOverlap):
            ib.mutual_information(bell_pair(), ["A"], ["A"])

    def test_extra_labels_traced_out(self):
        s = ib.tensor_product(bell_pair(), qstate([0.5, 0.5], name="C"))
        assert ib.mutual_information(s, ["A"], ["B"]) == pytest.approx(2.0, abs=1e-9)


class TestConditionalMutualInformation:
    def test_trivial_conditioner(self):
        s = ib.tensor_product(classically_correlated(), qstate([1.0], name="C"))
        cmi = ib.conditional_mutual_information(s, ["A"], ["B"], ["C"])
        assert cmi == pytest.approx(
            ib.mutual_information(s, ["A"], ["B"]), abs=1e-9
        )

    def test_empty_conditioner_equals_mi(self):
        assert ib.conditional_mutual_information(
            classically_correlated(), ["A"], ["B"], []
        ) == pytest.approx(1.0, abs=1e-9)

    def test_conditionally_product(self):
        rng = np.random.default_rng(1)
        blocks = np.zeros((8, 8), dtype=complex)
        for c in range(2):
            joint = np.kron(random_density(rng, 2), random_density(rng, 2))
            unit = np.zeros((2, 2))
            unit[c, c] = 1.0
            blocks += 0.5 * np.kron(joint, unit)
        s = labeled([("A", 2), ("B", 2), ("C", 2)], blocks)
        assert ib.conditional_mutual_information(s, ["A"], ["B"], ["C"]) == pytest.approx(
            0.0, abs=1e-9
        )

    def test_matches_per_outcome_average(self):
        rng = np.random.default_rng(2)
        instr = ib.random_instrument(2, 2, 2, 2, 2)
        rho = random_state(rng, 2)
        bundle = ib.dilate(instr, ib.purify(rho))
        theta_rax = ib.partial_trace(bundle.theta_full, ["R", "App", "X"])
        cmi = ib.conditional_mutual_information(theta_rax, ["R"], ["App"], ["X"])
        avg = sum(
            bundle.probs[i]
            * ib.mutual_information(
                ib.reduced(bundle, ["R", "App"], label), ["R"], ["App"]
            )
            for i, label in enumerate(instr.outcome_labels)
        )
        assert cmi == pytest.approx(avg, abs=1e-9)


class TestCoherentInformation:
    def test_bell_pair(self):
        assert ib.coherent_information(bell_pair(), ["A"], ["B"]) == pytest.approx(1.0, abs=1e-9)

    def test_product_with_pure_target(self):
        rng = np.random.default_rng(3)
        a = random_state(rng, 2, name="A")
        b = labeled([("B", 2)], np.diag([1.0, 0.0]))
        s = ib.tensor_product(a, b)
        expected = -ib.von_neumann_entropy(a)
        assert ib.coherent_information(s, ["A"], ["B"]) == pytest.approx(expected, abs=1e-9)

    def test_maximally_mixed_two_qubits(self):
        s = labeled([("A", 2), ("B", 2)], np.eye(4) / 4)
        assert ib.coherent_information(s, ["A"], ["B"]) == pytest.approx(-1.0, abs=1e-9)


class TestChiQuantity:
    def test_identical_members(self):
        rng = np.random.default_rng(4)
        sigma = random_state(rng, 3)
        assert ib.chi_quantity([(0.4, sigma), (0.6, sigma)]) == pytest.approx(0.0, abs=1e-9)

    def test_orthogonal_pure(self):
        ens = [(0.5, qstate([1.0, 0.0])), (0.5, qstate([0.0, 1.0]))]
        assert ib.chi_quantity(ens) == pytest.approx(1.0, abs=1e-9)

    def test_mixed_ensemble_value(self):
        ens = [(0.2, qstate([0.5, 0.5])), (0.8, qstate([1.0, 0.0]))]
        assert ib.chi_quantity(ens) == pytest.approx(H2_09 - 0.2, abs=1e-12)
        assert ib.chi_quantity(ens) == pytest.approx(0.26900, abs=1e-4)

    def test_bad_weights(self):
        with pytest.raises(ib.BadDistribution):
            ib.chi_quantity([(0.7, qstate([0.5, 0.5]))])


class TestInformationGain:
    def test_projective_on_mixed(self):
        assert ib.information_gain(ib.projective(), qstate([0.5, 0.5])) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_pure_input_gives_zero(self):
        instr = ib.random_instrument(5, 2, 2, 2, 2)
        rho = qstate([1.0, 0.0])
        assert ib.information_gain(instr, rho) == pytest.approx(0.0, abs=1e-9)

    def test_filter_value(self):
        got = ib.information_gain(ib.filter_family(2.0 / 3.0), qstate([0.9, 0.1]))
        assert got == pytest.approx(H2_09 - 0.2, abs=1e-9)
        assert got == pytest.approx(0.26900, abs=1e-4)

    @given(st.integers(0, 10**6))
    def test_povm_only_dependence(self, seed):
        rng = np.random.default_rng(seed)
        povm = ib.povm_of(ib.random_instrument(seed, 2, 2, 2, 2))
        rho = random_state(rng, 2)
        values = [
            ib.information_gain(realize_povm(povm, rng), rho) for _ in range(3)
        ]
        assert max(values) - min(values) <= 1e-9


class TestDisturbance:
    def test_unitary_instrument(self):
        u = haar_unitary(np.random.default_rng(6), 2)
        instr = ib.Instrument(2, 2, (ib.OutcomeMap("0", (u,)),))
        assert ib.disturbance(instr, qstate([0.5, 0.5])) == pytest.approx(0.0, abs=1e-9)

    def test_projective_on_mixed(self):
        assert ib.disturbance(ib.projective(), qstate([0.5, 0.5])) == pytest.approx(
            1.0, abs=1e-9
        )

    def test_fully_depolarizing_qubit_channel(self):
        # qubit-to-qubit erasure with 4 Kraus operators: delta = 1 - (1 - 2)
        kraus = tuple(
            np.outer(
                np.eye(2, dtype=complex)[:, i], np.eye(2, dtype=complex)[:, j]
            )
            / np.sqrt(2)
            for i in range(2)
            for j in range(2)
        )
        instr = ib.Instrument(2, 2, (ib.OutcomeMap("0", kraus),))
        assert ib.disturbance(instr, qstate([0.5, 0.5])) == pytest.approx(2.0, abs=1e-9)


class TestDisturbanceNoOutcomes:
    def test_single_outcome_equals_disturbance(self):
        instr = ib.depolarizing(0.7)
        rho = qstate([0.5, 0.5])
        assert ib.disturbance_no_outcomes(instr, rho) == pytest.approx(
            ib.disturbance(instr, rho), abs=1e-9
        )

    def test_projective_on_mixed(self):
        # entropy arithmetic: the averaged channel dephases, so the joint
        # reference-output state is classically correlated and I_c = 0
        got = ib.disturbance_no_outcomes(ib.projective(), qstate([0.5, 0.5]))
        assert got == pytest.approx(1.0, abs=1e-9)
        assert got >= ib.disturbance(ib.projective(), qstate([0.5, 0.5])) - 1e-9

    @given(st.integers(0, 10**6))
    def test_data_processing(self, seed):
        rng = np.random.default_rng(seed)
        instr = ib.random_instrument(seed, 2, 2, 2, 2)
        rho = random_state(rng, 2)
        assert ib.disturbance_no_outcomes(instr, rho) >= ib.disturbance(instr, rho) - 1e-9


class TestNoiseDelta:
    def test_single_kraus_vanishes(self):
        instr = ib.random_instrument(7, 3, 3, 3, 1)
        rho = random_state(np.random.default_rng(7), 3)
        assert ib.noise_delta(instr, rho) == pytest.approx(0.0, abs=1e-9)

    def test_fully_depolarizing_qubit_channel(self):
        kraus = tuple(
            np.outer(
                np.eye(2, dtype=complex)[:, i], np.eye(2, dtype=complex)[:, j]
            )
            / np.sqrt(2)
            for i in range(2)
            for j in range(2)
        )
        instr = ib.Instrument(2, 2, (ib.OutcomeMap("0", kraus),))
        assert ib.noise_delta(instr, qstate([0.5, 0.5])) == pytest.approx(2.0, abs=1e-9)

    @given(st.integers(0, 10**6))
    def test_equals_delta_minus_iota(self, seed):
        rng = np.random.default_rng(seed)
        instr = ib.random_instrument(seed, 2, 2, 2, 2)
        rho = random_state(rng, 2)
        assert ib.noise_delta(instr, rho) == pytest.approx(
            ib.disturbance(instr, rho) - ib.information_gain(instr, rho), abs=1e-9
        )

    def test_random_multiplicity_two_is_noisy(self):
        rho = qstate([0.5, 0.5])
        instr = ib.random_instrument(21, 2, 2, 2, 2)
        assert ib.noise_delta(instr, rho) > 1e-3


class TestGroenewoldGain:
    def test_projective_equals_gain(self):
        rho = qstate([0.5, 0.5])
        assert ib.groenewold_gain(ib.projective(), rho) == pytest.approx(1.0, abs=1e-9)

    def test_measure_and_reprepare_is_negative(self):
        plus = labeled([("Q", 2)], np.full((2, 2), 0.5))
        got = ib.groenewold_gain(ib.measure_and_reprepare(), plus)
        assert got == pytest.approx(-1.0, abs=1e-9)

    @given(st.integers(0, 10**6))
    def test_single_kraus_matches_information_gain(self, seed):
        rng = np.random.default_rng(seed)
        instr = ib.random_instrument(seed, 2, 2, 3, 1)
        rho = random_state(rng, 2)
        assert ib.groenewold_gain(instr, rho) == pytest.approx(
            ib.information_gain(instr, rho), abs=1e-9
        )


class TestSingleOutcome:
    def test_projective(self):
        rho = qstate([0.5, 0.5])
        for label in ("0", "1"):
            iota_m, delta_m, noise_m = ib.single_outcome_quantities(
                ib.projective(), rho, label
            )
            assert iota_m == pytest.approx(1.0, abs=1e-9)
            assert delta_m == pytest.approx(1.0, abs=1e-9)
            assert noise_m == pytest.approx(0.0, abs=1e-9)

    def test_filter_negative_values(self):
        iota_0, delta_0, noise_0 = ib.single_outcome_quantities(
            ib.filter_family(2.0 / 3.0), qstate([0.9, 0.1]), "0"
        )
        assert iota_0 == pytest.approx(H2_09 - 1.0, abs=1e-9)
        assert iota_0 == pytest.approx(-0.53100, abs=1e-4)
        assert delta_0 == pytest.approx(-0.53100, abs=1e-4)
        assert noise_0 == pytest.approx(0.0, abs=1e-9)

    def test_unitary_instrument(self):
        u = haar_unitary(np.random.default_rng(8), 2)
        instr = ib.Instrument(2, 2, (ib.OutcomeMap("0", (u,)),))
        out = ib.single_outcome_quantities(instr, qstate([0.5, 0.5]), "0")
        np.testing.assert_allclose(out, (0.0, 0.0, 0.0), atol=1e-9)

    def test_zero_probability(self):
        with pytest.raises(ib.ZeroProbabilityOutcome):
            ib.single_outcome_quantities(ib.filter_family(1.0), qstate([0.0, 1.0]), "1")

    @given(st.integers(0, 10**6))
    def test_single_outcome_balance(self, seed):
        rng = np.random.default_rng(seed)
        instr = ib.random_instrument(seed, 2, 3, 2, 2)
        rho = random_state(rng, 2)
        for label in instr.outcome_labels:
            if ib.outcome_probability(instr, label, rho) <= 1e-9:
                continue
            iota_m, delta_m, noise_m = ib.single_outcome_quantities(instr, rho, label)
            assert iota_m + noise_m == pytest.approx(delta_m, abs=1e-9)


class TestBalanceReport:
    def test_projective_fixture(self):
        rep = ib.balance_report(ib.projective(), qstate([0.5, 0.5]))
        assert rep.iota == pytest.approx(1.0, abs=1e-9)
        assert rep.delta == pytest.approx(1.0, abs=1e-9)
        assert rep.noise == pytest.approx(0.0, abs=1e-9)
        assert rep.iota_g == pytest.approx(1.0, abs=1e-9)
        assert rep.residual_balance <= 1e-9

    def test_depolarizing_fixture(self):
        rep = ib.balance_report(ib.depolarizing(1.0), qstate([0.5, 0.5]))
        assert rep.iota == pytest.approx(0.0, abs=1e-9)
        assert rep.delta == pytest.approx(2.0, abs=1e-9)
        assert rep.noise == pytest.approx(2.0, abs=1e-9)
        assert rep.iota_g == pytest.approx(-1.0, abs=1e-9)

    def test_zero_probability_outcomes_excluded(self):
        rep = ib.balance_report(ib.filter_family(1.0), qstate([0.0, 1.0]))
        assert [row.label for row in rep.per_outcome] == ["0"]
        assert rep.excluded_weight <= 1e-12

    def test_aggregation_residuals(self):
        rng = np.random.default_rng(9)
        instr = ib.random_instrument(9, 2, 2, 3, 2)
        rep = ib.balance_report(instr, random_state(rng, 2))
        for key in ("iota_aggregation", "delta_aggregation", "noise_aggregation"):
            assert rep.residual_routes[key] <= 1e-9

    def test_to_dict_field_names(self):
        rep = ib.balance_report(ib.projective(), qstate([0.5, 0.5]))
        doc = rep.to_dict()
        assert set(doc) >= {
            "iota",
            "delta",
            "noise",
            "iota_g",
            "residual_balance",
            "per_outcome",
        }
        assert set(doc["per_outcome"][0]) == {"label", "p", "iota_m", "delta_m", "noise_m"}

    @given(st.integers(0, 10**6))
    def test_balance_and_tradeoff_random(self, seed):
        rng = np.random.default_rng(seed)
        d_in = int(rng.integers(2, 4))
        n = int(rng.integers(2, 4))
        mult = int(rng.integers(1, 3))
        instr = ib.random_instrument(seed, d_in, 2, n, mult)
        rep = ib.balance_report(instr, random_state(rng, d_in))
        assert rep.residual_balance <= 1e-9
        assert rep.iota <= rep.delta + 1e-9
        assert rep.noise >= -1e-9
