// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "conelab/archimedean.hpp"
#include "conelab/localdens.hpp"
#include "conelab/quadform.hpp"
#include "conelab/util.hpp"

namespace conelab::enumerate {

struct Box {
  Vec3i lo{0, 0, 0};
  Vec3i hi{0, 0, 0}; // inclusive
};

/// Calls fn for every integer solution of F(x) = 0 in the box, each exactly
/// once. Iterates two axes and solves the exact integer quadratic (or linear)
/// equation in the third. Solutions within a fixed x1-stripe arrive in
/// lexicographic order; stripes are distributed over threads and replayed in
/// order, so the visit order is independent of the thread count.
void solutions_in_box(const TernaryForm& F, const Box& box,
                      const std::function<void(const Vec3i&)>& fn, int threads = 1);

std::vector<Vec3i> solutions_in_box_vec(const TernaryForm& F, const Box& box, int threads = 1);

struct CountRequest {
  TernaryForm form;
  archimedean::WeightFunction weight;
  std::optional<localdens::CongruenceCondition> condition;
  double B = 1;
  bool primitive = false;
  int threads = 1;
};

/// N_W(w,(L,Gamma);B) or its primitive variant: sum of w(x/B) over cone
/// points meeting the congruence (and gcd(x) = 1 if primitive). x = 0 is
/// included in the non-primitive count and never in the primitive one.
double weighted_count(const CountRequest& req);

/// One enumeration pass shared by a whole B-grid (the box is taken at the
/// largest B); returns one count per grid entry.
std::vector<double> weighted_count_grid(const CountRequest& req, const std::vector<double>& Bs);

/// Mobius-inverted primitive count: sum over d <= D coprime to L of
/// mu(d) * N_W(w,(L, dbar*Gamma); B/d). D defaults to the box reach.
double mobius_inverted_count(const CountRequest& req, std::optional<i64> D = std::nullopt);

} // namespace conelab::enumerate
