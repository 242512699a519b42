#include <vector>

#include "doctest.h"
#include "ivmm/errors.hpp"
#include "ivmm/imputer.hpp"
#include "ivmm/synth.hpp"
#include "support/fixtures.hpp"

using fixture::candidate_on;
using fixture::candidates_for;
using fixture::chain_pieces;
using fixture::pings_along;
using ivmm::build_trellis;
using ivmm::impute_route;

namespace {

ivmm::TrellisGraph trellis_over(const ivmm::RoadNetwork &net,
                                const std::vector<ivmm::GeoPoint> &points) {
  const auto traj = pings_along(points);
  return build_trellis(traj, candidates_for(net, traj, 100.0, 4), net,
                       ivmm::StParams{}, 2);
}

}  // namespace

TEST_CASE("a same-piece hop becomes one forward leg") {
  auto pieces = chain_pieces(1);
  pieces[0].length = 100.0;
  const auto net = ivmm::build_graph(pieces);
  const auto trellis = trellis_over(
      net, {candidate_on(net, 0, 0.2).foot, candidate_on(net, 0, 0.7).foot});
  const std::vector<int> selection(2, 0);

  const auto route = impute_route(net, trellis, selection);
  REQUIRE(route.anchors.size() == 2);
  REQUIRE(route.legs.size() == 1);
  CHECK_FALSE(route.legs[0].gap);
  CHECK(route.gap_count == 0);
  CHECK(route.total_length == doctest::Approx(50.0).epsilon(1e-9));
  REQUIRE(route.runs.size() == 1);
  CHECK(route.runs[0].front() == route.anchors[0].foot);
  CHECK(route.runs[0].back() == route.anchors[1].foot);
}

TEST_CASE("legs chain across pieces with hand-summed lengths") {
  const auto net = ivmm::build_graph(chain_pieces(3));
  const auto trellis = trellis_over(net, {candidate_on(net, 0, 0.5).foot,
                                          candidate_on(net, 1, 0.5).foot,
                                          candidate_on(net, 2, 0.5).foot});
  std::vector<int> selection;
  for (int i = 0; i < trellis.size(); ++i) {
    // The zero-distance candidate sits on the expected piece.
    selection.push_back(0);
    REQUIRE(trellis.slices[i].candidates[0].piece_id == i + 1);
  }

  const auto route = impute_route(net, trellis, selection);
  REQUIRE(route.legs.size() == 2);
  const double expected_leg0 =
      0.5 * net.pieces[0].length + 0.5 * net.pieces[1].length;
  const double expected_leg1 =
      0.5 * net.pieces[1].length + 0.5 * net.pieces[2].length;
  CHECK(route.legs[0].path.total_length ==
        doctest::Approx(expected_leg0).epsilon(1e-9));
  CHECK(route.legs[1].path.total_length ==
        doctest::Approx(expected_leg1).epsilon(1e-9));
  CHECK(route.total_length ==
        doctest::Approx(expected_leg0 + expected_leg1).epsilon(1e-9));
  CHECK(route.legs[0].node_count == 1);

  // One run threading foot, junction, foot, junction, foot.
  REQUIRE(route.runs.size() == 1);
  const auto &run = route.runs[0];
  REQUIRE(run.size() == 5);
  CHECK(run[1] == net.nodes[net.piece_head[0]]);
  CHECK(run[3] == net.nodes[net.piece_head[1]]);
}

TEST_CASE("an unreachable pair opens a gap and a second run") {
  auto pieces = chain_pieces(2);
  pieces.push_back(fixture::piece_between(10, 2, {33.48, -112.0},
                                          {33.48, -111.999}));
  pieces.push_back(fixture::piece_between(11, 2, {33.48, -111.999},
                                          {33.48, -111.998}));
  const auto net = ivmm::build_graph(pieces);
  const int island = net.piece_index_by_id.at(10);
  const auto trellis = trellis_over(net, {candidate_on(net, 0, 0.5).foot,
                                          candidate_on(net, 1, 0.5).foot,
                                          candidate_on(net, island, 0.5).foot,
                                          candidate_on(net, island + 1, 0.5).foot});
  const std::vector<int> selection(4, 0);

  const auto route = impute_route(net, trellis, selection);
  REQUIRE(route.legs.size() == 3);
  CHECK_FALSE(route.legs[0].gap);
  CHECK(route.legs[1].gap);
  CHECK_FALSE(route.legs[2].gap);
  CHECK(route.gap_count == 1);
  REQUIRE(route.runs.size() == 2);
  CHECK(route.runs[0].front() == route.anchors[0].foot);
  CHECK(route.runs[0].back() == route.anchors[1].foot);
  CHECK(route.runs[1].front() == route.anchors[2].foot);
  CHECK(route.runs[1].back() == route.anchors[3].foot);
  // Gap legs contribute nothing to the routed length.
  CHECK(route.total_length ==
        doctest::Approx(route.legs[0].path.total_length +
                        route.legs[2].path.total_length)
            .epsilon(1e-12));
}

TEST_CASE("every consecutive anchor pair owns exactly one leg") {
  ivmm::SynthParams sp;
  sp.rows = 4;
  sp.cols = 4;
  const auto net = ivmm::build_graph(ivmm::make_grid_pieces(sp));
  std::vector<ivmm::GeoPoint> points;
  for (int i = 0; i < 6; ++i) {
    points.push_back(candidate_on(net, i, 0.3 + 0.1 * i).foot);
  }
  const auto trellis = trellis_over(net, points);
  const std::vector<int> selection(trellis.size(), 0);
  const auto route = impute_route(net, trellis, selection);
  CHECK(route.anchors.size() == static_cast<size_t>(trellis.size()));
  CHECK(route.legs.size() == route.anchors.size() - 1);
  for (size_t i = 0; i < route.legs.size(); ++i) {
    CHECK(route.legs[i].from_ping == trellis.slices[i].ping_index);
    CHECK(route.legs[i].to_ping == trellis.slices[i + 1].ping_index);
  }
}

TEST_CASE("leg lengths dominate the straight-line anchor distance") {
  ivmm::SynthParams sp;
  sp.rows = 5;
  sp.cols = 5;
  const auto net = ivmm::build_graph(ivmm::make_grid_pieces(sp));
  std::vector<ivmm::GeoPoint> points;
  for (int i : {0, 5, 11, 17, 23}) {
    points.push_back(candidate_on(net, i, 0.4).foot);
  }
  const auto trellis = trellis_over(net, points);
  const std::vector<int> selection(trellis.size(), 0);
  const auto route = impute_route(net, trellis, selection);
  for (size_t i = 0; i < route.legs.size(); ++i) {
    if (route.legs[i].gap) continue;
    const double crow = ivmm::geodesic_distance(route.anchors[i].foot,
                                                route.anchors[i + 1].foot);
    CHECK(route.legs[i].path.total_length >= crow * (1.0 - 5e-3) - 1e-6);
  }
}

TEST_CASE("replaying a run polyline reproduces the routed length") {
  const auto net = ivmm::build_graph(chain_pieces(4));
  const auto trellis = trellis_over(net, {candidate_on(net, 0, 0.25).foot,
                                          candidate_on(net, 2, 0.5).foot,
                                          candidate_on(net, 3, 0.75).foot});
  const std::vector<int> selection(trellis.size(), 0);
  const auto route = impute_route(net, trellis, selection);
  REQUIRE(route.runs.size() == 1);
  double replay = 0.0;
  const auto &run = route.runs[0];
  for (size_t i = 0; i + 1 < run.size(); ++i) {
    replay += ivmm::geodesic_distance(run[i], run[i + 1]);
  }
  CHECK(replay == doctest::Approx(route.total_length).epsilon(1e-6));
}

TEST_CASE("cached trellis paths and fresh searches impute identically") {
  ivmm::SynthParams sp;
  sp.rows = 4;
  sp.cols = 5;
  const auto net = ivmm::build_graph(ivmm::make_grid_pieces(sp));
  std::vector<ivmm::GeoPoint> points;
  for (int i : {2, 7, 12, 18}) {
    points.push_back(candidate_on(net, i, 0.6).foot);
  }
  const auto trellis = trellis_over(net, points);
  const std::vector<int> selection(trellis.size(), 0);

  const auto cached = impute_route(net, trellis, selection, true);
  const auto fresh = impute_route(net, trellis, selection, false);
  CHECK(cached.total_length == doctest::Approx(fresh.total_length).epsilon(1e-12));
  CHECK(cached.gap_count == fresh.gap_count);
  REQUIRE(cached.legs.size() == fresh.legs.size());
  for (size_t i = 0; i < cached.legs.size(); ++i) {
    CHECK(cached.legs[i].gap == fresh.legs[i].gap);
    CHECK(cached.legs[i].path.nodes == fresh.legs[i].path.nodes);
    CHECK(cached.legs[i].path.total_length ==
          doctest::Approx(fresh.legs[i].path.total_length).epsilon(1e-12));
  }
  CHECK(cached.runs == fresh.runs);
}

TEST_CASE("a selection of the wrong shape is rejected") {
  const auto net = ivmm::build_graph(chain_pieces(2));
  const auto trellis = trellis_over(
      net, {candidate_on(net, 0, 0.5).foot, candidate_on(net, 1, 0.5).foot});
  CHECK_THROWS_AS(impute_route(net, trellis, {0}), ivmm::MalformedInput);
  CHECK_THROWS_AS(impute_route(net, trellis, {0, 99}), ivmm::MalformedInput);
}
