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

#include "gatesynth/controllability.hpp"

#include <gtest/gtest.h>

#include <random>

#include "gatesynth/device.hpp"
#include "test_util.hpp"

using namespace gatesynth;
using gatesynth::testing::random_hermitian;
using gatesynth::testing::oracle_closure_dimension;
using gatesynth::testing::to_eigen;

namespace {

DeviceParams heis_params() {
    return {{"B1", 1.0}, {"B2", 1.0}, {"J12", 0.1}};
}

}  // namespace

TEST(controllability, singleton_is_abelian) {
    auto r = lie_closure({pauli_string(1, "Z")});
    EXPECT_EQ(r.dimension, 1u);
    EXPECT_FALSE(r.is_full_su);
    EXPECT_EQ(r.depth_reached, 0u);
}

TEST(controllability, orthogonal_pair_generates_su2) {
    auto r = lie_closure({pauli_string(1, "Z"), pauli_string(1, "X")});
    EXPECT_EQ(r.dimension, 3u);
    EXPECT_TRUE(r.is_full_su);
    EXPECT_EQ(r.depth_reached, 1u);
}

TEST(controllability, builtin_devices_match_oracle) {
    std::vector<DeviceModel> devices{
        builtin_device("nmr1"),
        builtin_device("jj1", {{"E_c", 10}, {"E_J", 1}}),
        builtin_device("heis2", heis_params()),
        builtin_device("heis2perm", heis_params()),
        builtin_device("jj2", {{"E_c", 10}, {"E_J", 1}, {"E_L", 0.5}})};
    std::vector<size_t> expected{3, 3, 15, 15, 15};
    for (size_t k = 0; k < devices.size(); k++) {
        auto ops = devices[k].operators();
        size_t oracle = oracle_closure_dimension(ops);
        EXPECT_EQ(oracle, expected[k]) << devices[k].name();
        auto r = lie_closure(ops);
        EXPECT_EQ(r.dimension, oracle) << devices[k].name();
        EXPECT_EQ(r.is_full_su, true);
    }
}

TEST(controllability, partial_algebras_match_oracle) {
    std::vector<std::vector<HermitianOperator>> sets{
        {pauli_string(1, "ZI"), pauli_string(1, "IX")},
        {pauli_string(1, "ZI"), pauli_string(1, "XI")},
        {pauli_string(1, "ZI"), pauli_string(1, "XI"), pauli_string(1, "IZ"), pauli_string(1, "IX")},
        {pauli_string(1, "XX"), pauli_string(1, "ZI")},
        {pauli_string(1, "XX") + pauli_string(1, "YY"), pauli_string(1, "ZI") + pauli_string(1, "IZ")},
        {pauli_string(1, "ZI"), pauli_string(1, "IX"), pauli_string(1, "ZZ")},
    };
    for (size_t k = 0; k < sets.size(); k++) {
        EXPECT_EQ(lie_closure(sets[k]).dimension, oracle_closure_dimension(sets[k])) << "set " << k;
    }
    EXPECT_EQ(lie_closure(sets[0]).dimension, 2u);
    EXPECT_EQ(lie_closure(sets[2]).dimension, 6u);
}

TEST(controllability, random_generators_match_oracle) {
    std::mt19937_64 rng(21);
    for (size_t d : {2, 4, 8}) {
        for (int trial = 0; trial < 3; trial++) {
            std::vector<HermitianOperator> hams{random_hermitian(d, rng), random_hermitian(d, rng)};
            auto r = lie_closure(hams);
            EXPECT_EQ(r.dimension, oracle_closure_dimension(hams));
            EXPECT_EQ(r.dimension, d * d - 1);
        }
    }
}

TEST(controllability, basis_is_orthonormal_and_traceless) {
    auto dev = builtin_device("heis2perm", heis_params());
    auto r = lie_closure(dev.operators());
    for (size_t a = 0; a < r.basis.size(); a++) {
        EXPECT_NEAR(std::abs(r.basis[a].matrix().trace()), 0, 1e-10);
        for (size_t b = a; b < r.basis.size(); b++) {
            EXPECT_NEAR(hs_inner(r.basis[a], r.basis[b]), a == b ? 1.0 : 0.0, 1e-10);
        }
    }
}

TEST(controllability, invariant_under_rescaling_and_identity_shift) {
    auto dev = builtin_device("heis2", heis_params());
    auto ops = dev.operators();
    auto base = lie_closure(ops).dimension;
    auto scaled = ops;
    scaled[0] = -1e3 * scaled[0];
    scaled[2] = 1e-4 * scaled[2];
    EXPECT_EQ(lie_closure(scaled).dimension, base);
    auto shifted = ops;
    shifted[1] = shifted[1] + HermitianOperator(7.5 * ComplexMatrix::identity(4));
    EXPECT_EQ(lie_closure(shifted).dimension, base);
    EXPECT_EQ(lie_closure({HermitianOperator(ComplexMatrix::identity(2)), pauli_string(1, "Z")}).dimension, 1u);
}

TEST(controllability, rejects_non_power_of_two) {
    EXPECT_THROW(lie_closure({HermitianOperator(ComplexMatrix::identity(3))}), InputError);
    EXPECT_THROW(lie_closure({}), InputError);
    EXPECT_THROW(lie_closure({pauli_string(1, "Z"), pauli_string(1, "ZZ")}), ContractError);
}

TEST(controllability, gram_matrix_examples) {
    auto g = gram_matrix({pauli_string(1, "Z"), pauli_string(1, "X")});
    EXPECT_EQ(g, (std::vector<std::vector<double>>{{2, 0}, {0, 2}}));
    auto jj = builtin_device("jj1", {{"E_c", 10}, {"E_J", 1}});
    auto gj = gram_matrix(jj.operators());
    EXPECT_NEAR(gj[0][1], 0.5, 1e-15);
    EXPECT_NEAR(gj[1][0], 0.5, 1e-15);
    EXPECT_EQ(gram_matrix({pauli_string(1, "Z")}), (std::vector<std::vector<double>>{{2}}));
}

TEST(controllability, lowenthal_orthogonal_pair) {
    auto r = lowenthal_steps(pauli_string(1, "Z"), pauli_string(1, "X"));
    EXPECT_EQ(r.psi, 0);
    EXPECT_EQ(r.steps, 3);
    EXPECT_FALSE(r.k.has_value());
}

TEST(controllability, lowenthal_josephson_x_03) {
    auto jj = builtin_device("jj1", {{"E_c", 10}, {"E_J", 3}});
    auto r = lowenthal_steps(jj.op(0), jj.op(1));
    EXPECT_NEAR(r.psi, 0.3 / std::sqrt(1.09), 1e-12);
    EXPECT_NEAR(r.psi, 0.28735, 1e-5);
    EXPECT_EQ(r.k, 2);
    EXPECT_EQ(r.steps, 4);
}

TEST(controllability, lowenthal_closed_form_grid) {
    for (int i = 1; i <= 10; i++) {
        double x = 0.05 * i;
        auto jj = builtin_device("jj1", {{"E_c", 1.0}, {"E_J", x}});
        auto r = lowenthal_steps(jj.op(0), jj.op(1));
        EXPECT_NEAR(r.psi, x / std::sqrt(1 + x * x), 1e-12) << x;
        EXPECT_EQ(r.steps, 4) << x;
    }
}

TEST(controllability, lowenthal_bracket_property) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> angle(0.01, std::numbers::pi / 2 - 1e-6);
    for (int trial = 0; trial < 200; trial++) {
        double theta = angle(rng);
        // Two traceless generators whose Bloch axes meet at angle theta: psi = cos(theta).
        auto h1 = pauli_string(1.3, "Z");
        auto h2 = pauli_string(0.4 * std::cos(theta), "Z") + pauli_string(0.4 * std::sin(theta), "X");
        auto r = lowenthal_steps(h1, h2);
        auto swapped = lowenthal_steps(h2, h1);
        EXPECT_NEAR(r.psi, std::cos(theta), 1e-12);
        EXPECT_EQ(r.steps, swapped.steps);
        EXPECT_EQ(r.psi, swapped.psi);
        ASSERT_TRUE(r.k.has_value());
        EXPECT_LT(std::cos(std::numbers::pi / *r.k), r.psi);
        EXPECT_LE(r.psi, std::cos(std::numbers::pi / (*r.k + 1)));
        EXPECT_EQ(r.steps, *r.k + 2);
    }
}

TEST(controllability, lowenthal_boundary_is_inclusive) {
    // psi = 1/2 = cos(pi/3) lands on the upper edge of k = 2.
    auto h1 = pauli_string(1, "Z");
    auto h2 = pauli_string(0.5, "Z") + pauli_string(std::sqrt(3.0) / 2, "X");
    auto r = lowenthal_steps(h1, h2);
    EXPECT_NEAR(r.psi, 0.5, 1e-15);
    EXPECT_EQ(r.k, 2);
    EXPECT_EQ(r.steps, 4);
    auto r3 = lowenthal_steps(h1, pauli_string(0.6, "Z") + pauli_string(0.8, "X"));
    EXPECT_EQ(r3.k, 3);
    EXPECT_EQ(r3.steps, 5);
}

TEST(controllability, lowenthal_errors) {
    EXPECT_THROW(lowenthal_steps(pauli_string(1, "Z"), pauli_string(2, "Z")), ControllabilityError);
    EXPECT_THROW(lowenthal_steps(pauli_string(1, "ZZ"), pauli_string(1, "XX")), ContractError);
}
