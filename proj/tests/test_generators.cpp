#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

#include "nethj/error.hpp"
#include "nethj/generators.hpp"
#include "nethj/hausdorff.hpp"
#include "nethj/network.hpp"

using namespace nethj;

TEST_CASE("dyadic level n spans [0, 1 - 2^-n] with n edges") {
  for (int n = 1; n <= 6; ++n) {
    const EmbeddedNetwork net = dyadic_network(n);
    CHECK(net.dim() == 1);
    CHECK(net.vertex_count() == n + 1);
    CHECK(net.edge_count() == n);
    CHECK(net.total_length() == doctest::Approx(1.0 - std::pow(2.0, -n)));
    CHECK(net.min_edge_length() == doctest::Approx(std::pow(2.0, -n)));
    // canonical vertex order is by coordinate: v_i = 1 - 2^-i
    for (int i = 0; i <= n; ++i)
      CHECK(net.vertices()[i][0] == doctest::Approx(1.0 - std::pow(2.0, -i)));
  }
  bool threw = false;
  try {
    dyadic_network(0);
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::DepthTooSmall;
  }
  CHECK(threw);
}

TEST_CASE("sierpinski prefractal has the exact combinatorial counts") {
  const auto corners = default_sierpinski_corners();
  for (int n = 0; n <= 4; ++n) {
    const EmbeddedNetwork net = sierpinski_prefractal(n, corners);
    const int pow3 = static_cast<int>(std::pow(3, n + 1));
    CHECK(net.edge_count() == pow3);
    CHECK(net.vertex_count() == (pow3 + 3) / 2);
    CHECK(net.total_length() ==
          doctest::Approx(3.0 * std::pow(1.5, n)));
    CHECK(net.min_edge_length() == doctest::Approx(std::pow(2.0, -n)));
  }
}

TEST_CASE("collinear corners are rejected") {
  bool threw = false;
  try {
    sierpinski_prefractal(1, {Point{0.0, 0.0}, Point{1.0, 0.0}, Point{2.0, 0.0}});
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::CollinearCorners;
  }
  CHECK(threw);
}

TEST_CASE("consecutive levels nest: directed hausdorff is zero") {
  const auto corners = default_sierpinski_corners();
  for (int n = 0; n <= 2; ++n) {
    const auto [d, cert] = directed_hausdorff(
        sierpinski_prefractal(n, corners),
        sierpinski_prefractal(n + 1, corners), 1e-2);
    CHECK(d <= 1e-9);
  }
}

TEST_CASE("verify_expanding certifies the dyadic sequence with fixed radii") {
  const ExpandingSequence seq = dyadic_sequence(5);
  const ExpandingReport report = verify_expanding(seq.levels, ExpandMode::FixedR);
  CHECK(report.nesting_ok);
  CHECK(report.stabilization_ok);
  CHECK(report.ok());
  for (const auto& c : report.certificates) {
    CHECK(c.certified);
    if (!c.vacuous) {
      CHECK(c.radius > 0.0);
      CHECK(c.level_m >= c.first_level);
    }
  }
}

TEST_CASE("verify_expanding certifies the gasket with shrinking radii") {
  const ExpandingSequence seq =
      sierpinski_sequence(4, default_sierpinski_corners());
  const ExpandingReport report =
      verify_expanding(seq.levels, ExpandMode::ShrinkingR, 1.0);
  CHECK(report.nesting_ok);
  CHECK(report.stabilization_ok);
}

TEST_CASE("gasket under fixed radii: outcome frozen from the clipping oracle") {
  // at finite depth every vertex still admits some fixed ball that meets no
  // later edges, because the construction only refines inside the triangles
  // the vertex already touches; the certified radii shrink with depth
  const ExpandingSequence seq =
      sierpinski_sequence(4, default_sierpinski_corners());
  const ExpandingReport report =
      verify_expanding(seq.levels, ExpandMode::FixedR);
  CHECK(report.nesting_ok);
  CHECK(report.stabilization_ok);
  double min_certified = 1e9;
  for (const auto& c : report.certificates)
    if (c.certified) min_certified = std::min(min_certified, c.radius);
  CHECK(min_certified < 0.25);  // radii decay with the subdivision scale
}

TEST_CASE("a non-nested sequence is flagged") {
  std::vector<EmbeddedNetwork> levels;
  levels.push_back(validate_network(1, {{0.0}, {0.5}}, {{0, 1}}));
  levels.push_back(validate_network(1, {{0.25}, {1.0}}, {{0, 1}}));
  const ExpandingReport report = verify_expanding(levels, ExpandMode::FixedR);
  CHECK_FALSE(report.nesting_ok);
  CHECK_FALSE(report.nesting_witness.empty());
}

TEST_CASE("sequences save and load back identically") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "nethj_seq_test";
  fs::remove_all(dir);
  const ExpandingSequence seq = dyadic_sequence(3);
  save_sequence(seq, dir.string());
  const ExpandingSequence back = load_sequence((dir / "manifest.json").string());
  CHECK(back.kind == seq.kind);
  REQUIRE(back.levels.size() == seq.levels.size());
  for (std::size_t i = 0; i < seq.levels.size(); ++i)
    CHECK(network_to_json_text(back.levels[i]) ==
          network_to_json_text(seq.levels[i]));
  fs::remove_all(dir);
}
