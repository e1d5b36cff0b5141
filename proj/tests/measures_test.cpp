// Copyright 2026 The dpm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpm/measures.hpp"

#include <gtest/gtest.h>

#include "dpm/error.hpp"
#include "dpm/measures_json.hpp"

namespace dpm {
namespace {

const GroundPoint a = GroundPoint::atom(0);
const GroundPoint b = GroundPoint::atom(1);

TEST(BaseModelTest, ValidatesWeights) {
  EXPECT_NO_THROW(BaseModel(2.0, {0.3, 0.7}));
  EXPECT_THROW(BaseModel(2.0, {0.3, 0.6}), DomainError);
  EXPECT_THROW(BaseModel(0.0, {1.0}), DomainError);
  EXPECT_THROW(BaseModel(1.0, {-0.1, 1.1}), DomainError);
  EXPECT_THROW(BaseModel(1.0, {0.5}, 0.6), DomainError);
}

TEST(NuOfTest, Examples) {
  const BaseModel m(2.0, {0.3, 0.7});
  EXPECT_DOUBLE_EQ(nu_of(m, Block{{0}, {}}), 0.3);
  EXPECT_DOUBLE_EQ(nu_of(m, Block{{0, 1}, {}}), 1.0);
  const BaseModel half(1.0, {0.5}, 0.5);
  EXPECT_DOUBLE_EQ(nu_of(half, Block{{}, {{0.0, 0.5}}}), 0.25);
  const auto per_block = nu_of(m, Partition::by_atoms(2));
  EXPECT_DOUBLE_EQ(per_block[0] + per_block[1], 1.0);
}

TEST(IsGoodTest, Examples) {
  EXPECT_FALSE(is_good(BaseModel(1.0, {0.5, 0.5})));
  EXPECT_TRUE(is_good(BaseModel(1.0, {0.3, 0.7})));
  EXPECT_TRUE(is_good(BaseModel::diffuse(1.0)));
  EXPECT_FALSE(is_good(BaseModel(1.0, {1.0})));
  EXPECT_TRUE(is_good(BaseModel(1.0, {0.25, 0.25, 0.25, 0.25})));
  EXPECT_FALSE(is_good(BaseModel(1.0, {0.5, 0.0, 0.5})));
}

TEST(DiscreteMeasureTest, MergesAndDropsZeros) {
  const DiscreteMeasure mu({{b, 0.2}, {a, 0.3}, {b, 0.5}, {GroundPoint::atom(2), 0.0}});
  ASSERT_EQ(mu.size(), 2u);
  EXPECT_EQ(mu.atoms()[0].point, a);
  EXPECT_DOUBLE_EQ(mu.mass_at(b), 0.7);
  EXPECT_DOUBLE_EQ(mu.mass_at(GroundPoint::atom(2)), 0.0);
  EXPECT_DOUBLE_EQ(mu.total(), 1.0);
  EXPECT_THROW(DiscreteMeasure({{a, -0.1}}), DomainError);
}

TEST(GroundPointTest, ContValidation) {
  EXPECT_THROW(GroundPoint::cont(1.5), DomainError);
  EXPECT_THROW(GroundPoint::cont(-0.1), DomainError);
  EXPECT_EQ(GroundPoint::cont(-0.0), GroundPoint::cont(0.0));
  EXPECT_LT(GroundPoint::atom(5), GroundPoint::cont(0.0));
}

TEST(MixWithDiracTest, Examples) {
  const DiscreteMeasure mu({{a, 0.4}, {b, 0.6}});
  const DiscreteMeasure same = mix_with_dirac(mu, 0.0, a);
  EXPECT_DOUBLE_EQ(same.mass_at(a), 0.4);
  const DiscreteMeasure full = mix_with_dirac(mu, 1.0, a);
  EXPECT_DOUBLE_EQ(full.mass_at(a), 1.0);
  EXPECT_EQ(full.size(), 1u);
  const DiscreteMeasure half = mix_with_dirac(mu, 0.5, a);
  EXPECT_DOUBLE_EQ(half.mass_at(a), 0.7);
  EXPECT_DOUBLE_EQ(half.mass_at(b), 0.3);
  EXPECT_THROW(mix_with_dirac(mu, 1.5, a), DomainError);
  EXPECT_THROW(mix_with_dirac(DiscreteMeasure{}, 0.5, a), DomainError);
}

TEST(RemoveAtomTest, Examples) {
  const DiscreteMeasure mu({{a, 0.25}, {b, 0.75}});
  const AtomRemoval not_atom = remove_atom(mu, GroundPoint::atom(7));
  EXPECT_FALSE(not_atom.degenerate);
  EXPECT_DOUBLE_EQ(not_atom.measure.mass_at(a), 0.25);

  const AtomRemoval removed = remove_atom(mu, a);
  EXPECT_FALSE(removed.degenerate);
  ASSERT_EQ(removed.measure.size(), 1u);
  EXPECT_DOUBLE_EQ(removed.measure.mass_at(b), 1.0);

  const AtomRemoval gone = remove_atom(DiscreteMeasure::dirac(a), a);
  EXPECT_TRUE(gone.degenerate);
  EXPECT_TRUE(gone.measure.empty());
  EXPECT_EQ(gone.measure.total(), 0.0);

  EXPECT_THROW(remove_atom(DiscreteMeasure({{a, 0.5}}), a), PreconditionError);
}

TEST(ProjectTest, Examples) {
  const DiscreteMeasure mu({{a, 0.4}, {b, 0.6}});
  const Partition one({Block{{0, 1}, {}}});
  EXPECT_DOUBLE_EQ(project(mu, one)[0], 1.0);
  const auto two = project(mu, Partition::by_atoms(2));
  EXPECT_DOUBLE_EQ(two[0], 0.4);
  EXPECT_DOUBLE_EQ(two[1], 0.6);

  const DiscreteMeasure cont({{GroundPoint::cont(0.2), 0.5}, {GroundPoint::cont(0.9), 0.5}});
  const double cuts[] = {0.5};
  const auto halves = project(cont, Partition::by_cuts(cuts));
  EXPECT_DOUBLE_EQ(halves[0], 0.5);
  EXPECT_DOUBLE_EQ(halves[1], 0.5);
  EXPECT_THROW(project(DiscreteMeasure{}, one), DomainError);
}

TEST(PartitionTest, CoverageAndOverlap) {
  const double cuts[] = {0.25, 0.6};
  const Partition p = Partition::by_cuts(cuts);
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(p.block_of(GroundPoint::cont(0.0)), 0u);
  EXPECT_EQ(p.block_of(GroundPoint::cont(0.25)), 1u);
  EXPECT_EQ(p.block_of(GroundPoint::cont(1.0)), 2u);
  EXPECT_THROW(p.block_of(GroundPoint::atom(0)), DomainError);
  EXPECT_THROW(Partition({Block{{}, {{0.0, 0.6}}}, Block{{}, {{0.5, 1.0}}}}), DomainError);
  EXPECT_THROW(Partition({Block{{0}, {}}, Block{{0}, {}}}), DomainError);
  EXPECT_THROW(Partition::by_atoms(1).validate_for(BaseModel(1.0, {0.5, 0.5})),
               DomainError);
  EXPECT_THROW(Partition::by_atoms(1).validate_for(BaseModel(1.0, {0.5}, 0.5)),
               DomainError);
}

TEST(JsonTest, RoundTrip) {
  const BaseModel m(2.0, {0.3, 0.7});
  const nlohmann::json j = m;
  const BaseModel back = base_model_from_json(j);
  EXPECT_EQ(back.alpha(), 2.0);
  EXPECT_EQ(back.atom_probs()[1], 0.7);

  const DiscreteMeasure mu({{a, 0.25}, {GroundPoint::cont(0.5), 0.75}});
  const nlohmann::json jm = mu;
  const DiscreteMeasure mu2 = discrete_measure_from_json(jm);
  EXPECT_EQ(mu2.size(), 2u);
  EXPECT_DOUBLE_EQ(mu2.mass_at(GroundPoint::cont(0.5)), 0.75);

  const BaseModel no_alpha =
      base_model_from_json(nlohmann::json::parse(R"({"diffuse_weight": 1})"), 3.0);
  EXPECT_EQ(no_alpha.alpha(), 3.0);
}

}  // namespace
}  // namespace dpm
