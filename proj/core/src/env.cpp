// Copyright 2026 The seqtouch Authors
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

#include "seqtouch/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "seqtouch/rng.hpp"

namespace seqtouch {
namespace {

// Rail geometry, rail frame. The deck runs along u with a 12 mm notch cut
// 6 mm deep into its top; a ridge rises from the deck further out. Abutting
// blocks overlap instead of sharing a bare seam (the ridge reaches below the
// deck top, the notch floor reaches under both deck halves) and the solid
// extends to the bottom of the workspace, so a tip sliding exactly along a
// face line still collides with whatever that face runs into.
constexpr std::array<Rect, 4> kBlocks = {{
    {-0.100, 0.014, -0.200, -0.010},  // deck, left of the notch
    {0.026, 0.100, -0.200, -0.010},   // deck, right of the notch
    {0.010, 0.030, -0.200, -0.016},   // notch floor
    {0.050, 0.080, -0.012, 0.000},    // ridge
}};
constexpr Vec2 kLatch{0.020, -0.014};

constexpr double kPi = 3.14159265358979323846;

double clampd(double x, double lo, double hi) {
  return std::min(std::max(x, lo), hi);
}

struct SweepHit {
  bool hit = false;
  double t = 0.0;
  Vec2 n;          // outward normal of the entered face
  int block = -1;
};

// Earliest interior entry of the segment p + t*d, t in [0, 1], into any
// block. Slab test per axis; an axis with zero motion must already be
// strictly inside its slab, so travel flush along a face never counts as an
// entry into that face's block.
SweepHit first_entry(const Vec2& p, const Vec2& d) {
  SweepHit best;
  best.t = std::numeric_limits<double>::infinity();
  for (int b = 0; b < static_cast<int>(kBlocks.size()); ++b) {
    const Rect& r = kBlocks[b];
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    int lo_axis = -1;  // axis that realizes the entry time
    if (d.x != 0.0) {
      double t0 = (r.u0 - p.x) / d.x;
      double t1 = (r.u1 - p.x) / d.x;
      if (t0 > t1) std::swap(t0, t1);
      if (t0 > lo) {
        lo = t0;
        lo_axis = 0;
      }
      hi = std::min(hi, t1);
    } else if (!(p.x > r.u0 && p.x < r.u1)) {
      continue;
    }
    if (d.y != 0.0) {
      double t0 = (r.v0 - p.y) / d.y;
      double t1 = (r.v1 - p.y) / d.y;
      if (t0 > t1) std::swap(t0, t1);
      if (t0 >= lo) {
        lo = t0;
        lo_axis = 1;
      }
      hi = std::min(hi, t1);
    } else if (!(p.y > r.v0 && p.y < r.v1)) {
      continue;
    }
    if (lo_axis < 0 || lo >= hi || lo < 0.0 || lo > 1.0) continue;
    if (lo < best.t) {
      best.hit = true;
      best.t = lo;
      best.block = b;
      best.n = lo_axis == 0 ? Vec2{d.x > 0.0 ? -1.0 : 1.0, 0.0}
                            : Vec2{0.0, d.y > 0.0 ? -1.0 : 1.0};
    }
  }
  return best;
}

struct Contact {
  Vec2 n;
  int block = -1;
};

struct Resolution {
  Vec2 end;  // constrained endpoint on the obstacle boundary
  int num_contacts = 0;
  Contact contacts[2];
};

// Sweeps the commanded motion, sliding tangentially along each contact plane.
// Two orthogonal planes pin the point, so two slides exhaust the motion.
Resolution resolve_motion(const Vec2& start, const Vec2& delta) {
  Resolution res;
  Vec2 p = start;
  Vec2 d = delta;
  for (int i = 0; i < 3 && (d.x != 0.0 || d.y != 0.0); ++i) {
    SweepHit h = first_entry(p, d);
    if (!h.hit) {
      p.x += d.x;
      p.y += d.y;
      break;
    }
    p.x += h.t * d.x;
    p.y += h.t * d.y;
    // Snap the hit coordinate exactly onto the face plane.
    const Rect& r = kBlocks[h.block];
    if (h.n.x != 0.0) {
      p.x = h.n.x > 0.0 ? r.u1 : r.u0;
    } else {
      p.y = h.n.y > 0.0 ? r.v1 : r.v0;
    }
    if (res.num_contacts < 2) res.contacts[res.num_contacts++] = {h.n, h.block};
    const double rem_x = (1.0 - h.t) * d.x;
    const double rem_y = (1.0 - h.t) * d.y;
    const double along = rem_x * h.n.x + rem_y * h.n.y;
    d.x = rem_x - along * h.n.x;
    d.y = rem_y - along * h.n.y;
  }
  res.end = p;
  return res;
}

// A recorded contact still produces force at the end of the step only while
// the constrained point remains on the face span; sliding off the rim
// releases it.
bool engaged(const Contact& c, const Vec2& p) {
  const Rect& r = kBlocks[c.block];
  if (c.n.x != 0.0) return p.y >= r.v0 && p.y <= r.v1;
  return p.x >= r.u0 && p.x <= r.u1;
}

}  // namespace

Vec2 world_to_target(const Vec2& p, const HiddenState& e) {
  const double c = std::cos(e.theta);
  const double s = std::sin(e.theta);
  const double dx = p.x - e.x;
  const double dy = p.y - e.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Vec2 target_to_world(const Vec2& q, const HiddenState& e) {
  const double c = std::cos(e.theta);
  const double s = std::sin(e.theta);
  return {e.x + c * q.x - s * q.y, e.y + s * q.x + c * q.y};
}

Vec2 contact_force(const Vec2& dp, const Vec2& n, const EnvConfig& cfg) {
  const double overshoot = std::max(0.0, -(dp.x * n.x + dp.y * n.y));
  const double f = cfg.k_eff() * overshoot;
  return {f * n.x, f * n.y};
}

ContactEnv::ContactEnv(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
}

const std::array<Rect, 4>& ContactEnv::blocks() { return kBlocks; }

Vec2 ContactEnv::latch_point() { return kLatch; }

Pose ContactEnv::latch_pose(const HiddenState& hidden) const {
  const Vec2 w = target_to_world(kLatch, hidden);
  return {w.x, w.y, hidden.theta};
}

bool ContactEnv::within_tolerance(const WorldState& state) const {
  const Vec2 latch = target_to_world(kLatch, state.hidden);
  const double dx = state.ee_pose.x - latch.x;
  const double dy = state.ee_pose.y - latch.y;
  if (std::sqrt(dx * dx + dy * dy) > cfg_.eps_pos) return false;
  const double dphi =
      std::remainder(state.ee_pose.phi - state.hidden.theta, 2.0 * kPi);
  return std::abs(dphi) <= cfg_.eps_ang;
}

std::pair<WorldState, Observation> ContactEnv::reset_with_hidden(
    std::uint64_t seed, const HiddenState& hidden) const {
  WorldState ws;
  ws.hidden = hidden;
  ws.ee_pose = cfg_.start_pose;
  ws.ee_anchor =
      world_to_target({cfg_.start_pose.x, cfg_.start_pose.y}, hidden);
  ws.ee_velocity = {0.0, 0.0, 0.0};
  ws.latched = false;
  ws.step_index = 0;
  ws.noise_seed = derive_seed(seed, 1);
  ws.latched = within_tolerance(ws);

  Observation obs;
  obs.wrench = {0.0, 0.0, 0.0};
  obs.ee_pose = ws.ee_pose;
  obs.ee_velocity = {0.0, 0.0, 0.0};
  if (cfg_.noise_enabled) {
    Rng nr(derive_seed(ws.noise_seed, 0));
    for (int i = 0; i < 3; ++i) nr.normal();  // wrench draws, no contact
    obs.ee_pose.x += cfg_.sigma_pose * nr.normal();
    obs.ee_pose.y += cfg_.sigma_pose * nr.normal();
    obs.ee_pose.phi += cfg_.sigma_pose * nr.normal();
    const double sv = cfg_.sigma_pose / cfg_.dt;
    obs.ee_velocity.vx += sv * nr.normal();
    obs.ee_velocity.vy += sv * nr.normal();
    obs.ee_velocity.omega += sv * nr.normal();
  }
  return {ws, obs};
}

std::pair<WorldState, Observation> ContactEnv::reset(std::uint64_t seed,
                                                     bool randomize) const {
  HiddenState hidden{0.0, 0.0, 0.0};
  if (randomize) {
    Rng hr(derive_seed(seed, 0));
    hidden.x = hr.uniform(-cfg_.hidden_range_x, cfg_.hidden_range_x);
    hidden.y = hr.uniform(-cfg_.hidden_range_y, cfg_.hidden_range_y);
    hidden.theta =
        hr.uniform(-cfg_.hidden_range_theta, cfg_.hidden_range_theta);
  }
  return reset_with_hidden(seed, hidden);
}

std::pair<WorldState, Observation> ContactEnv::step(const WorldState& state,
                                                    const Action& action) const {
  if (!std::isfinite(action.dx) || !std::isfinite(action.dy) ||
      !std::isfinite(action.dphi)) {
    throw std::invalid_argument("non-finite action");
  }
  const double dx = clampd(action.dx, -kActionClipXY, kActionClipXY);
  const double dy = clampd(action.dy, -kActionClipXY, kActionClipXY);
  const double dphi = clampd(action.dphi, -kActionClipPhi, kActionClipPhi);

  const HiddenState& e = state.hidden;
  const double half = cfg_.ee_half();

  // Commands move the constrained anchor, not the yielded physical pose, so
  // compliant penetration never accumulates across steps.
  const Vec2 start_t = state.ee_anchor;
  const Vec2 start_w = target_to_world(start_t, e);
  const Vec2 set_w{clampd(start_w.x + dx, -half, half),
                   clampd(start_w.y + dy, -half, half)};
  const Vec2 set_t = world_to_target(set_w, e);

  const Resolution res = resolve_motion(
      start_t, {set_t.x - start_t.x, set_t.y - start_t.y});

  // Engaged planes: reaction force plus compliant yield into the surface.
  const Vec2 dp{set_t.x - res.end.x, set_t.y - res.end.y};
  const double yield_ratio = cfg_.k_ctrl / (cfg_.k_env + cfg_.k_ctrl);
  Vec2 force_t{0.0, 0.0};
  Vec2 phys_t = res.end;
  bool in_contact = false;
  for (int i = 0; i < res.num_contacts; ++i) {
    const Contact& c = res.contacts[i];
    if (!engaged(c, res.end)) continue;
    const double overshoot = std::max(0.0, -(dp.x * c.n.x + dp.y * c.n.y));
    if (overshoot <= 0.0) continue;
    in_contact = true;
    force_t.x += cfg_.k_eff() * overshoot * c.n.x;
    force_t.y += cfg_.k_eff() * overshoot * c.n.y;
    phys_t.x -= yield_ratio * overshoot * c.n.x;
    phys_t.y -= yield_ratio * overshoot * c.n.y;
  }

  const Vec2 phys_w = target_to_world(phys_t, e);
  const double phi =
      clampd(state.ee_pose.phi + dphi, -cfg_.theta_max, cfg_.theta_max);

  WorldState ns = state;
  ns.ee_pose = {phys_w.x, phys_w.y, phi};
  ns.ee_anchor = res.end;
  ns.ee_velocity = {(phys_w.x - state.ee_pose.x) / cfg_.dt,
                    (phys_w.y - state.ee_pose.y) / cfg_.dt,
                    std::remainder(phi - state.ee_pose.phi, 2.0 * kPi) /
                        cfg_.dt};
  ns.step_index = state.step_index + 1;
  ns.latched = state.latched || within_tolerance(ns);

  // Sensed wrench, world frame. Torque is the contact force transported to a
  // wrist torque_arm above the tip along the tool axis.
  const double c = std::cos(e.theta);
  const double s = std::sin(e.theta);
  Observation obs;
  obs.wrench.fx = c * force_t.x - s * force_t.y;
  obs.wrench.fy = s * force_t.x + c * force_t.y;
  obs.wrench.tau =
      cfg_.torque_arm * (std::cos(phi) * obs.wrench.fx +
                         std::sin(phi) * obs.wrench.fy);
  obs.ee_pose = ns.ee_pose;
  obs.ee_velocity = ns.ee_velocity;

  if (cfg_.noise_enabled) {
    Rng nr(derive_seed(ns.noise_seed, static_cast<std::uint64_t>(ns.step_index)));
    const double nf[3] = {nr.normal(), nr.normal(), nr.normal()};
    if (in_contact) {
      obs.wrench.fx += cfg_.sigma_force * nf[0];
      obs.wrench.fy += cfg_.sigma_force * nf[1];
      obs.wrench.tau += cfg_.sigma_force * nf[2];
    }
    obs.ee_pose.x += cfg_.sigma_pose * nr.normal();
    obs.ee_pose.y += cfg_.sigma_pose * nr.normal();
    obs.ee_pose.phi += cfg_.sigma_pose * nr.normal();
    const double sv = cfg_.sigma_pose / cfg_.dt;
    obs.ee_velocity.vx += sv * nr.normal();
    obs.ee_velocity.vy += sv * nr.normal();
    obs.ee_velocity.omega += sv * nr.normal();
  }
  return {ns, obs};
}

}  // namespace seqtouch
