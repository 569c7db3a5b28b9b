#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "secdrive/errors.hpp"
#include "secdrive/experiments.hpp"

using namespace secdrive;
using std::numbers::pi;

namespace {

std::string csv(const SweepResult& r) {
  std::ostringstream out;
  write_csv(r, out);
  return out.str();
}

std::size_t middle(const SweepResult& r) { return r.axis_values.size() / 2; }

}  // namespace

TEST(Output, NumberFormatRoundTrips) {
  for (double v : {0.1, -2.5e-300, pi, 1.0 / 3.0, 0.0, 1e22}) {
    EXPECT_EQ(std::strtod(format_number(v).c_str(), nullptr), v);
  }
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
}

TEST(Output, CsvLayout) {
  SweepResult r;
  r.axis_name = "q";
  r.axis_values = {0.0, 0.5};
  r.series = {{"a", {1.0, 2.0}}, {"b", {-0.25, 3.0}}};
  EXPECT_EQ(csv(r), "q,a,b\n0,1,-0.25\n0.5,2,3\n");
  const nlohmann::json j = to_json(r);
  EXPECT_EQ(j["axis_name"], "q");
  EXPECT_EQ(j["series"]["b"][0], -0.25);
}

TEST(Output, ValidateRejectsRaggedOrNonFinite) {
  SweepResult r;
  r.axis_name = "q";
  r.axis_values = {0.0, 0.5};
  r.series = {{"a", {1.0}}};
  EXPECT_THROW(r.validate(), Error);
  r.series = {{"a", {1.0, std::nan("")}}};
  EXPECT_THROW(r.validate(), Error);
  EXPECT_THROW(r.column("missing"), Error);
}

TEST(Parallel, CoversRangeAndRethrows) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), [&](std::size_t k) { hits[k] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100,
                            [](std::size_t k) {
                              if (k == 57) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  EXPECT_GE(worker_count(), 1u);
}

TEST(Grid, SymmetricAndOdd) {
  const std::vector<double> q = symmetric_q_grid(plot_truncation(), 101);
  ASSERT_EQ(q.size(), 101u);
  EXPECT_EQ(q[50], 0.0);
  for (std::size_t k = 0; k < q.size(); ++k) EXPECT_EQ(q[k], -q[q.size() - 1 - k]);
  EXPECT_DOUBLE_EQ(q.front(), -(pi - 1e-3 * pi));
}

TEST(FieldAndLevels, Examples) {
  const SweepResult r = run_field_and_levels(1.0, 2001);
  const std::size_t mid = middle(r);
  EXPECT_EQ(r.axis_values[mid], 0.0);
  EXPECT_NEAR(r.column("omega_z_over_nu")[mid], -0.5, 1e-15);
  EXPECT_NEAR(r.column("E_plus_over_nu")[mid] - r.column("E_minus_over_nu")[mid], -1.0, 1e-15);
  EXPECT_GT(std::abs(r.column("omega_z_over_nu").front()), 100.0);
  EXPECT_GT(std::abs(r.column("omega_z_over_nu").back()), 100.0);
  for (const auto& [name, values] : r.series) {
    for (std::size_t k = 0; k < values.size(); ++k) {
      EXPECT_EQ(values[k], values[values.size() - 1 - k]) << name;
    }
  }
}

TEST(FieldAndLevels, ScaledOutputIndependentOfNu) {
  const SweepResult a = run_field_and_levels(1.0, 301);
  const SweepResult b = run_field_and_levels(8.0, 301);
  for (const auto& [name, values] : a.series) {
    const std::vector<double>& other = b.column(name);
    for (std::size_t k = 0; k < values.size(); ++k) {
      EXPECT_NEAR(values[k], other[k], 1e-12 * std::abs(values[k])) << name;
    }
  }
}

TEST(BlochPath, Examples) {
  const SweepResult r = run_bloch_path(1.0, 100001);
  const std::size_t mid = middle(r);
  EXPECT_NEAR(r.column("theta")[mid], pi / 2, 1e-15);
  EXPECT_NEAR(r.column("phi")[mid], pi, 1e-15);
  EXPECT_LT(r.column("theta").front(), 1e-5);
  EXPECT_LT(r.column("theta").back(), 1e-5);
  EXPECT_NEAR(std::stod(r.metadata.at("solid_angle")), pi - 2, 1e-6);
  EXPECT_EQ(r.metadata.at("orientation"), "clockwise");
  EXPECT_NEAR(r.column("Rz")[mid], 0.0, 1e-15);
}

TEST(Truncation, Examples) {
  const double tenth = pi / 10;
  const SweepResult r = run_truncation_sweep(1.0, {1e-3 * pi, 0.01 * pi, tenth, 0.2 * pi});
  const std::vector<double>& rel = r.column("relative_error");
  EXPECT_LT(rel[2], 1e-3);
  EXPECT_GT(rel[3], 1e-3);
  EXPECT_LT(rel[3], 1e-2);
  EXPECT_LT(rel[0], rel[1]);
  EXPECT_LT(rel[1], rel[2]);
  EXPECT_LT(rel[0], 1e-11);
  // leading tail estimate delta^4 / 128
  const double loop = (pi - 2) / 2;
  for (std::size_t k = 0; k < 3; ++k) {
    const double d = r.axis_values[k];
    EXPECT_NEAR(rel[k] / (std::pow(d, 4) / 128 / loop), 1.0, 0.05) << d;
  }
  for (std::size_t k = 0; k < rel.size(); ++k) {
    EXPECT_NEAR(r.column("geometric_phase")[k], loop * (1 - rel[k]), 1e-11);
  }
}

TEST(Truncation, DefaultGridIsMonotoneAndSpansRange) {
  const std::vector<double> deltas = default_truncation_deltas();
  ASSERT_EQ(deltas.size(), 60u);
  EXPECT_NEAR(deltas.front(), 1e-3 * pi, 1e-15);
  EXPECT_NEAR(deltas.back(), 0.3 * pi, 1e-13);
  const SweepResult r = run_truncation_sweep(1.0, deltas);
  const std::vector<double>& rel = r.column("relative_error");
  for (std::size_t k = 1; k < rel.size(); ++k) EXPECT_GT(rel[k], rel[k - 1]);
  EXPECT_THROW(run_truncation_sweep(1.0, {0.0}), ValidationError);
  EXPECT_THROW(run_truncation_sweep(1.0, {2.0}), ValidationError);
}

TEST(Adiabaticity, SweepSeries) {
  const SweepResult r = run_adiabaticity(1.0, 401);
  const std::size_t mid = middle(r);
  EXPECT_EQ(r.column("ratio_closed_form")[mid], 0.0);
  EXPECT_EQ(r.column("fidelity_loss")[mid], 0.0);
  for (std::size_t k = 0; k < r.axis_values.size(); ++k) {
    EXPECT_NEAR(r.column("ratio_state_derivative")[k], r.column("ratio_closed_form")[k], 1e-5);
    EXPECT_NEAR(r.column("fidelity_loss")[k], r.column("fidelity_loss_closed_form")[k], 1e-10);
  }
  const std::vector<double>& overlap = r.column("invariant_adiabatic_overlap");
  EXPECT_LT(*std::min_element(overlap.begin(), overlap.end()), 1.0 - 1e-3);
}

TEST(Universality, EnvelopesMatchSecant) {
  const double dp = 1e-3 * pi;
  const SweepResult r = run_universality(default_universality_envelopes(dp), dp);
  const std::vector<double>& g = r.column("geometric_phase");
  ASSERT_EQ(g.size(), 4u);
  for (double v : g) EXPECT_NEAR(v, g.back(), 1e-6);
  const double closed = std::stod(r.metadata.at("closed_form"));
  EXPECT_NEAR(r.column("geometric_phase_quadrature").back(), closed, 1e-8);
  EXPECT_NEAR(g.back(), closed, 1e-7);
  EXPECT_EQ(r.metadata.at("envelopes"), "constant;gaussian;sin2;secant");
}

TEST(Universality, OppositeWeightNegates) {
  const double dp = 0.05 * pi;
  const auto envelopes = default_universality_envelopes(dp);
  const SweepResult up = run_universality(envelopes, dp, 0.5, 2000);
  const SweepResult down = run_universality(envelopes, dp, -0.5, 2000);
  for (std::size_t k = 0; k < up.axis_values.size(); ++k) {
    EXPECT_NEAR(down.column("geometric_phase")[k], -up.column("geometric_phase")[k], 1e-13);
  }
  EXPECT_THROW(run_universality(envelopes, dp, 0.2), ValidationError);
  EXPECT_THROW(run_universality({PulseSpec::secant(1.0)}, dp), ValidationError);
}

TEST(Determinism, BitIdenticalAcrossRunsAndThreadCounts) {
  const std::string a = csv(run_bloch_path(1.0, 5001)) + csv(run_adiabaticity(2.0, 501)) +
                        csv(run_truncation_sweep(1.0, default_truncation_deltas()));
  ::setenv("SECDRIVE_THREADS", "1", 1);
  EXPECT_EQ(worker_count(), 1u);
  const std::string b = csv(run_bloch_path(1.0, 5001)) + csv(run_adiabaticity(2.0, 501)) +
                        csv(run_truncation_sweep(1.0, default_truncation_deltas()));
  ::unsetenv("SECDRIVE_THREADS");
  EXPECT_EQ(a, b);
}
