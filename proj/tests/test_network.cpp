#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ivmm/errors.hpp"
#include "ivmm/network.hpp"
#include "ivmm/synth.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using fixture::candidate_on;
using fixture::chain_pieces;
using fixture::piece_between;
using ivmm::build_graph;
using ivmm::shortest_path;

TEST_CASE("a single two-way piece yields two nodes and two arcs") {
  const auto net = build_graph(chain_pieces(1));
  CHECK(net.node_count() == 2);
  CHECK(net.arc_count() == 2);
  CHECK(net.component_count == 1);
  CHECK(net.piece_tail[0] != net.piece_head[0]);
}

TEST_CASE("a oneway piece yields one arc") {
  auto pieces = chain_pieces(1);
  pieces[0].oneway = true;
  const auto net = build_graph(pieces);
  CHECK(net.node_count() == 2);
  CHECK(net.arc_count() == 1);
  CHECK(net.arcs[0].forward);
}

TEST_CASE("a three-piece chain shares its interior nodes") {
  const auto net = build_graph(chain_pieces(3));
  CHECK(net.node_count() == 4);
  CHECK(net.arc_count() == 6);
  CHECK(net.component_count == 1);
  CHECK(net.piece_head[0] == net.piece_tail[1]);
  CHECK(net.piece_head[1] == net.piece_tail[2]);
}

TEST_CASE("arc count follows the oneway flags") {
  std::mt19937_64 rng(3);
  auto pieces = ivmm::make_grid_pieces(ivmm::SynthParams{});
  int expected = 0;
  for (auto &p : pieces) {
    p.oneway = rng() % 3 == 0;
    expected += p.oneway ? 1 : 2;
  }
  const auto net = build_graph(pieces);
  CHECK(net.arc_count() == expected);
}

TEST_CASE("an empty piece list cannot become a graph") {
  CHECK_THROWS_AS(build_graph({}), ivmm::EmptyNetwork);
}

TEST_CASE("same-piece forward distance is the frac difference") {
  auto pieces = chain_pieces(1);
  pieces[0].length = 100.0;  // exact stored length drives the arithmetic
  const auto net = build_graph(pieces);
  const auto from = candidate_on(net, 0, 0.2);
  const auto to = candidate_on(net, 0, 0.7);
  const auto path = shortest_path(net, from, to);
  REQUIRE(path.has_value());
  CHECK(path->total_length == doctest::Approx(50.0).epsilon(1e-12));
  REQUIRE(path->steps.size() == 1);
  CHECK(path->steps[0].piece_id == 1);
  CHECK(path->steps[0].forward);
}

TEST_CASE("a candidate reaches itself at zero cost") {
  const auto net = build_graph(chain_pieces(2));
  const auto c = candidate_on(net, 1, 0.4);
  const auto path = shortest_path(net, c, c);
  REQUIRE(path.has_value());
  CHECK(path->total_length == 0.0);
}

TEST_CASE("two-way pieces allow the backward hop, oneway pieces do not") {
  auto pieces = chain_pieces(1);
  pieces[0].length = 100.0;
  SUBCASE("two-way") {
    const auto net = build_graph(pieces);
    const auto path =
        shortest_path(net, candidate_on(net, 0, 0.7), candidate_on(net, 0, 0.2));
    REQUIRE(path.has_value());
    CHECK(path->total_length == doctest::Approx(50.0).epsilon(1e-12));
    CHECK_FALSE(path->steps[0].forward);
  }
  SUBCASE("oneway") {
    pieces[0].oneway = true;
    const auto net = build_graph(pieces);
    const auto path =
        shortest_path(net, candidate_on(net, 0, 0.7), candidate_on(net, 0, 0.2));
    CHECK_FALSE(path.has_value());
  }
}

TEST_CASE("disconnected components are unreachable and labeled apart") {
  auto pieces = chain_pieces(2);
  // A second chain far north of the first.
  pieces.push_back(piece_between(10, 2, {34.0, -112.0}, {34.0, -111.999}));
  const auto net = build_graph(pieces);
  CHECK(net.component_count == 2);
  const int far_index = net.piece_index_by_id.at(10);
  CHECK(net.component[net.piece_tail[0]] !=
        net.component[net.piece_tail[far_index]]);
  const auto path =
      shortest_path(net, candidate_on(net, 0, 0.5), candidate_on(net, far_index, 0.5));
  CHECK_FALSE(path.has_value());
}

TEST_CASE("chain routes accumulate partial entry and exit pieces") {
  const auto net = build_graph(chain_pieces(3));
  const auto from = candidate_on(net, 0, 0.5);
  const auto to = candidate_on(net, 2, 0.25);
  const auto path = shortest_path(net, from, to);
  REQUIRE(path.has_value());
  const double expected = 0.5 * net.pieces[0].length + net.pieces[1].length +
                          0.25 * net.pieces[2].length;
  CHECK(path->total_length == doctest::Approx(expected).epsilon(1e-12));
  REQUIRE(path->steps.size() == 3);
  CHECK(path->steps[0].piece_id == 1);
  CHECK(path->steps[1].piece_id == 2);
  CHECK(path->steps[2].piece_id == 3);
  CHECK(path->entry_frac == 0.5);
  CHECK(path->exit_frac == 0.25);
}

TEST_CASE("step lengths always sum to the total") {
  std::mt19937_64 rng(17);
  ivmm::SynthParams sp;
  sp.rows = 4;
  sp.cols = 4;
  const auto net = build_graph(ivmm::make_grid_pieces(sp));
  std::uniform_int_distribution<int> piece(0, static_cast<int>(net.pieces.size()) - 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto from = candidate_on(net, piece(rng), frac(rng));
    const auto to = candidate_on(net, piece(rng), frac(rng));
    const auto path = shortest_path(net, from, to);
    REQUIRE(path.has_value());
    double sum = 0.0;
    for (const auto &step : path->steps) {
      CHECK(step.traversed >= 0.0);
      sum += step.traversed;
    }
    CHECK(sum == doctest::Approx(path->total_length).epsilon(1e-9));
  }
}

TEST_CASE("routes agree with exhaustive simple-path search") {
  std::mt19937_64 rng(29);
  ivmm::SynthParams sp;
  sp.rows = 3;
  sp.cols = 3;
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int round = 0; round < 20; ++round) {
    auto pieces = ivmm::make_grid_pieces(sp);
    for (auto &p : pieces) p.oneway = rng() % 4 == 0;
    const auto net = build_graph(pieces);
    std::uniform_int_distribution<int> piece(0, static_cast<int>(pieces.size()) - 1);
    for (int i = 0; i < 25; ++i) {
      const auto from = candidate_on(net, piece(rng), frac(rng));
      const auto to = candidate_on(net, piece(rng), frac(rng));
      const auto fast = shortest_path(net, from, to);
      const auto slow = oracle::simple_paths_shortest(net, from, to);
      REQUIRE(fast.has_value() == slow.has_value());
      if (fast) {
        CHECK(fast->total_length ==
              doctest::Approx(*slow).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("network distance is bounded below by the crow-flight distance") {
  std::mt19937_64 rng(31);
  const auto net = build_graph(ivmm::make_grid_pieces(ivmm::SynthParams{}));
  std::uniform_int_distribution<int> piece(0, static_cast<int>(net.pieces.size()) - 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const auto from = candidate_on(net, piece(rng), frac(rng));
    const auto to = candidate_on(net, piece(rng), frac(rng));
    const auto path = shortest_path(net, from, to);
    REQUIRE(path.has_value());
    const double crow = ivmm::geodesic_distance(from.foot, to.foot);
    CHECK(path->total_length >= crow * (1.0 - 5e-3) - 1e-6);
  }
}

TEST_CASE("two-way networks route symmetrically") {
  std::mt19937_64 rng(37);
  const auto net = build_graph(ivmm::make_grid_pieces(ivmm::SynthParams{}));
  std::uniform_int_distribution<int> piece(0, static_cast<int>(net.pieces.size()) - 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const auto a = candidate_on(net, piece(rng), frac(rng));
    const auto b = candidate_on(net, piece(rng), frac(rng));
    const auto ab = shortest_path(net, a, b);
    const auto ba = shortest_path(net, b, a);
    REQUIRE(ab.has_value());
    REQUIRE(ba.has_value());
    CHECK(ab->total_length == doctest::Approx(ba->total_length).epsilon(1e-9));
  }
}

TEST_CASE("many-to-many matches pairwise searches") {
  std::mt19937_64 rng(41);
  ivmm::SynthParams sp;
  sp.rows = 3;
  sp.cols = 4;
  auto pieces = ivmm::make_grid_pieces(sp);
  for (auto &p : pieces) p.oneway = rng() % 5 == 0;
  const auto net = build_graph(pieces);
  std::uniform_int_distribution<int> piece(0, static_cast<int>(pieces.size()) - 1);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  std::vector<ivmm::Candidate> from_set;
  std::vector<ivmm::Candidate> to_set;
  for (int i = 0; i < 4; ++i) from_set.push_back(candidate_on(net, piece(rng), frac(rng)));
  for (int i = 0; i < 5; ++i) to_set.push_back(candidate_on(net, piece(rng), frac(rng)));
  const auto table = ivmm::many_to_many_shortest(net, from_set, to_set);
  REQUIRE(table.size() == from_set.size());
  for (size_t i = 0; i < from_set.size(); ++i) {
    REQUIRE(table[i].size() == to_set.size());
    for (size_t j = 0; j < to_set.size(); ++j) {
      const auto single = shortest_path(net, from_set[i], to_set[j]);
      REQUIRE(table[i][j].has_value() == single.has_value());
      if (single) {
        CHECK(table[i][j]->total_length ==
              doctest::Approx(single->total_length).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("a small search radius hides faraway targets") {
  const auto net = build_graph(chain_pieces(3));
  const auto from = candidate_on(net, 0, 0.5);
  const auto to = candidate_on(net, 2, 0.5);
  CHECK_FALSE(shortest_path(net, from, to, 50.0).has_value());
  const auto wide = shortest_path(net, from, to, 10000.0);
  const auto unbounded = shortest_path(net, from, to);
  REQUIRE(wide.has_value());
  REQUIRE(unbounded.has_value());
  CHECK(wide->total_length == unbounded->total_length);
}

TEST_CASE("node-to-node arc routes follow the chain") {
  const auto net = build_graph(chain_pieces(3));
  const int start = net.piece_tail[0];
  const int goal = net.piece_head[2];
  const auto route = ivmm::shortest_arc_route(net, start, goal);
  REQUIRE(route.has_value());
  REQUIRE(route->size() == 3);
  CHECK(net.arcs[(*route)[0]].piece_index == 0);
  CHECK(net.arcs[(*route)[1]].piece_index == 1);
  CHECK(net.arcs[(*route)[2]].piece_index == 2);
}
