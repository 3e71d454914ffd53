// Copyright 2026 The gatesynth Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gatesynth/pulse.hpp"

#include <gtest/gtest.h>

#include <random>

#include "gatesynth/device.hpp"
#include "gatesynth/gates.hpp"
#include "test_util.hpp"

using namespace gatesynth;
using gatesynth::testing::max_abs_diff;
using gatesynth::testing::random_hermitian;
using gatesynth::testing::reference_expm;
using gatesynth::testing::to_eigen;

TEST(propagate, empty_sequence_is_identity) {
    std::vector<HermitianOperator> hams{pauli_string(1, "Z")};
    EXPECT_EQ(propagate(hams, PulseSequence{}).matrix(), ComplexMatrix::identity(2));
}

TEST(propagate, applies_first_step_first) {
    std::vector<HermitianOperator> hams{pauli_string(1, "Z"), pauli_string(1, "X")};
    PulseSequence seq{{{0, 0.3}, {1, 0.7}}};
    ComplexMatrix expected = expm_hermitian(hams[1], 0.7).matrix() * expm_hermitian(hams[0], 0.3).matrix();
    EXPECT_LE(max_abs_diff(propagate(hams, seq).matrix(), expected), 1e-15);
    ComplexMatrix reversed = expm_hermitian(hams[0], 0.3).matrix() * expm_hermitian(hams[1], 0.7).matrix();
    EXPECT_GT(max_abs_diff(propagate(hams, seq).matrix(), reversed), 0.1);
}

TEST(propagate, matches_reference_product) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> dur(0, 3);
    for (size_t d : {2, 4, 8}) {
        std::vector<HermitianOperator> hams;
        for (int k = 0; k < 3; k++) {
            hams.push_back(random_hermitian(d, rng, 1.0));
        }
        PulseSequence seq;
        Eigen::MatrixXcd ref = Eigen::MatrixXcd::Identity(d, d);
        for (int j = 0; j < 10; j++) {
            PulseStep step{static_cast<size_t>(j % 3), dur(rng)};
            seq.steps.push_back(step);
            ref = reference_expm(hams[step.hamiltonian], step.duration) * ref;
        }
        auto u = to_eigen(propagate(hams, seq).matrix());
        EXPECT_LE((u - ref).cwiseAbs().maxCoeff(), 1e-11) << d;
    }
}

TEST(propagate, stays_unitary) {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> dur(0, 50);
    for (size_t d : {2, 4, 8}) {
        std::vector<HermitianOperator> hams{random_hermitian(d, rng, 5.0), random_hermitian(d, rng, 5.0)};
        PulseSequence seq;
        for (int j = 0; j < 32; j++) {
            seq.steps.push_back({static_cast<size_t>(j % 2), dur(rng)});
            EXPECT_LE(unitarity_defect(propagate(hams, seq).matrix()), 1e-11);
        }
    }
}

TEST(propagate, errors) {
    std::vector<HermitianOperator> hams{pauli_string(1, "Z")};
    EXPECT_THROW(propagate(hams, PulseSequence{{{1, 0.5}}}), ContractError);
    EXPECT_THROW(propagate(hams, PulseSequence{{{0, NAN}}}), InputError);
    EXPECT_THROW(propagate(std::span<const HermitianOperator>{}, PulseSequence{}), ContractError);
}

TEST(objective, f_test_examples) {
    auto id4 = UnitaryGate::identity(4);
    auto cnot = build_gate("cnot");
    EXPECT_EQ(f_test(id4, id4), 0);
    EXPECT_NEAR(f_test(id4, UnitaryGate(ComplexMatrix(id4.matrix()) * Complex(-1))), 16, 1e-15);
    EXPECT_NEAR(f_test(cnot, id4), 4, 1e-15);
    EXPECT_NEAR(f_test(id4, UnitaryGate(pauli_string(1, "XI").matrix())), 8, 1e-15);
    EXPECT_THROW(f_test(id4, UnitaryGate::identity(2)), ContractError);
}

TEST(objective, phase_invariant_examples) {
    auto id2 = UnitaryGate::identity(2);
    EXPECT_NEAR(f_phase_invariant(id2, UnitaryGate(pauli::x())), 4, 1e-15);
    auto cnot = build_gate("cnot");
    for (double a : {0.0, 0.4, 2.0, -3.0}) {
        ComplexMatrix m = cnot.matrix();
        m *= std::polar(1.0, a);
        EXPECT_LE(f_phase_invariant(cnot, UnitaryGate(m)), 1e-14) << a;
    }
    EXPECT_NEAR(f_phase_invariant(cnot, UnitaryGate::identity(4)), 8 - 4, 1e-14);
}

TEST(objective, properties) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> phase(-3, 3);
    for (int trial = 0; trial < 200; trial++) {
        size_t d = trial % 2 ? 4 : 2;
        auto h1 = random_hermitian(d, rng, 1.0);
        auto h2 = random_hermitian(d, rng, 1.0);
        auto g = expm_hermitian(h1, 1.0);
        auto u = expm_hermitian(h2, 1.0);
        double f = f_test(g, u);
        double fp = f_phase_invariant(g, u);
        double dd = static_cast<double>(d);
        EXPECT_GE(f, -1e-12);
        EXPECT_LE(f, 4 * dd + 1e-12);
        EXPECT_GE(fp, -1e-12);
        EXPECT_LE(fp, f + 1e-12);
        EXPECT_LE(fp, 2 * dd + 1e-12);
        // Direct formula 2d - 2|Tr(G^dag U)|.
        EXPECT_NEAR(fp, 2 * dd - 2 * std::abs(overlap(g.matrix(), u.matrix())), 1e-12);
        EXPECT_NEAR(f, 2 * dd - 2 * overlap(g.matrix(), u.matrix()).real(), 1e-12);
        ComplexMatrix shifted = u.matrix();
        shifted *= std::polar(1.0, phase(rng));
        EXPECT_NEAR(f_phase_invariant(g, UnitaryGate(shifted)), fp, 1e-12);
        EXPECT_NEAR(f_test(g, u), f_test(u, g), 1e-12);
        EXPECT_NEAR(objective_value(ObjectiveKind::plain, g.matrix(), u.matrix()), f, 0);
        EXPECT_NEAR(objective_value(ObjectiveKind::phase_invariant, g.matrix(), u.matrix()), fp, 0);
    }
}

TEST(objective, kind_names) {
    EXPECT_EQ(parse_objective_kind("plain"), ObjectiveKind::plain);
    EXPECT_EQ(parse_objective_kind("phase"), ObjectiveKind::phase_invariant);
    EXPECT_EQ(parse_objective_kind(to_string(ObjectiveKind::phase_invariant)), ObjectiveKind::phase_invariant);
    EXPECT_EQ(parse_objective_kind(to_string(ObjectiveKind::plain)), ObjectiveKind::plain);
    EXPECT_THROW(parse_objective_kind("fidelity"), InputError);
}
