#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <numeric>

#include "cogpso/pso.hpp"

using namespace cogpso;

namespace {

Particle particle_1d(double x, double v, double pbest) {
    return Particle{{x}, {v}, {pbest}, 0.0};
}

}  // namespace

TEST_SUITE("pso-core") {

TEST_CASE("draw_phi") {
    Rng rng(1);
    CHECK(draw_phi(0.0, rng) == 0.0);

    double sum = 0.0;
    bool in_range = true;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double phi = draw_phi(2.0, rng);
        in_range = in_range && phi > 0.0 && phi < 2.0;
        sum += phi;
    }
    CHECK(in_range);
    CHECK(sum / draws == doctest::Approx(1.0).epsilon(0.02));

    std::vector<double> per_dim(5);
    draw_phi(1.0, rng, per_dim);
    CHECK(per_dim[0] != per_dim[1]);
}

TEST_CASE("velocity_update_gbest") {
    SUBCASE("fixed point") {
        const Particle p{{1.5, -2}, {0, 0}, {1.5, -2}, 0};
        const std::vector<double> g{1.5, -2};
        CHECK(velocity_update_gbest(p, g, 0.7, 1.3, 0.4) == std::vector<double>{0, 0});
    }
    SUBCASE("pure inertia") {
        const Particle p{{1, 2}, {0.25, -3}, {9, 9}, 0};
        const std::vector<double> g{-4, 4};
        CHECK(velocity_update_gbest(p, g, 1.0, 0.0, 0.0) == std::vector<double>{0.25, -3});
    }
    SUBCASE("direct substitution: 0.5*2 + (3-1) + (5-1) = 7") {
        const Particle p = particle_1d(1, 2, 3);
        CHECK(velocity_update_gbest(p, std::vector<double>{5}, 0.5, 1.0, 1.0) == std::vector<double>{7});
    }
    SUBCASE("clamp") {
        const Particle p = particle_1d(1, 2, 3);
        const std::vector<double> clamp{1.5};
        CHECK(velocity_update_gbest(p, std::vector<double>{5}, 0.5, 1.0, 1.0, clamp) == std::vector<double>{1.5});
        const Particle q = particle_1d(1, -20, 1);
        CHECK(velocity_update_gbest(q, std::vector<double>{1}, 1.0, 1.0, 1.0, clamp) == std::vector<double>{-1.5});
    }
    SUBCASE("dimension mismatch") {
        const Particle p = particle_1d(1, 2, 3);
        CHECK_THROWS_AS(velocity_update_gbest(p, std::vector<double>{5, 5}, 0.5, 1.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("velocity_update_cog") {
    SUBCASE("direct substitution: 0.5 + (5-2) + (-1-2) = 0.5") {
        const Particle p = particle_1d(2, 1, 4);
        CHECK(velocity_update_cog(p, std::vector<double>{6}, 0.5, 1.0, 1.0) == std::vector<double>{0.5});
    }
    SUBCASE("pure inertia") {
        const Particle p{{3, -1}, {0.5, 0.125}, {7, 8}, 0};
        CHECK(velocity_update_cog(p, std::vector<double>{2, 2}, 1.0, 0.0, 0.0) == std::vector<double>{0.5, 0.125});
    }
    SUBCASE("all-zero fixed point") {
        const Particle p = particle_1d(0, 0, 0);
        CHECK(velocity_update_cog(p, std::vector<double>{0}, 0.9, 1.2, 0.7) == std::vector<double>{0});
    }
    SUBCASE("mean-attractor variant: 0.5 + (5-2) + (6-2) = 7.5") {
        const Particle p = particle_1d(2, 1, 4);
        CHECK(velocity_update_cog(p, std::vector<double>{6}, 0.5, 1.0, 1.0, {}, CogVariant::mean_attractor) ==
              std::vector<double>{7.5});
    }
    SUBCASE("variant names") {
        CHECK(parse_cog_variant("as-printed") == CogVariant::as_printed);
        CHECK(parse_cog_variant(to_string(CogVariant::mean_attractor)) == CogVariant::mean_attractor);
        CHECK_THROWS_AS(parse_cog_variant("other"), std::invalid_argument);
    }
}

TEST_CASE("position_update") {
    const BoundingBox box10{{0.0, 0.0}, {10.0, 10.0}};
    SUBCASE("zero velocity") {
        Particle p{{1, 1}, {0, 0}, {1, 1}, 0};
        position_update(p, box10);
        CHECK(p.position == std::vector<double>{1, 1});
    }
    SUBCASE("direct sum inside the box") {
        Particle p{{1}, {2}, {1}, 0};
        position_update(p, BoundingBox{{0.0}, {10.0}});
        CHECK(p.position == std::vector<double>{3});
        CHECK(p.velocity == std::vector<double>{2});
    }
    SUBCASE("reflection at the upper bound flips the velocity") {
        Particle p{{0.9}, {0.3}, {0.9}, 0};
        position_update(p, BoundingBox{{0.0}, {1.0}});
        CHECK(p.position[0] == doctest::Approx(0.8).epsilon(1e-15));
        CHECK(p.velocity[0] == -0.3);
    }
    SUBCASE("reflection at the lower bound") {
        Particle p{{0.25}, {-0.5}, {0.25}, 0};
        position_update(p, BoundingBox{{0.0}, {1.0}});
        CHECK(p.position[0] == 0.25);
        CHECK(p.velocity[0] == 0.5);
    }
    SUBCASE("overshoot beyond the opposite bound is clamped") {
        Particle p{{0.5}, {3.0}, {0.5}, 0};
        position_update(p, BoundingBox{{0.0}, {1.0}});
        CHECK(p.position[0] == 0.0);
    }
}

TEST_CASE("pbest_update follows the strict-improvement rule") {
    Particle p{{1}, {0}, {0}, 5.0};
    CHECK_FALSE(pbest_update(p, 5.0));
    CHECK(p.pbest_position == std::vector<double>{0});
    p.position = {2};
    CHECK(pbest_update(p, 4.0));
    CHECK(p.pbest_fitness == 4.0);
    CHECK(p.pbest_position == std::vector<double>{2});

    Particle q{{0}, {0}, {0}, std::numeric_limits<double>::infinity()};
    std::vector<double> trace;
    for (double f : {5.0, 3.0, 4.0, 2.0}) {
        pbest_update(q, f);
        trace.push_back(q.pbest_fitness);
    }
    CHECK(trace == std::vector<double>{5, 3, 3, 2});
}

TEST_CASE("best_of and topologies") {
    std::vector<Particle> ps(3);
    ps[0].pbest_fitness = 3;
    ps[1].pbest_fitness = 1;
    ps[2].pbest_fitness = 1;
    CHECK(best_of(Topology::global(3), ps) == 1);

    const auto one_block = Topology::contiguous_blocks(3, 3);
    CHECK(best_of(one_block, ps, 0) == best_of(Topology::global(3), ps));

    const auto singles = Topology::contiguous_blocks(3, 1);
    CHECK(best_of(singles, ps, 0) == 0);
    CHECK(best_of(singles, ps, 2) == 2);

    CHECK(Topology::round_robin(5, 2).neighborhood_sizes() == std::vector<std::size_t>{3, 2});
    CHECK(Topology::contiguous_blocks(7, 3).neighborhood_sizes() == std::vector<std::size_t>{3, 3, 1});
    CHECK(Topology::global(4).membership().empty());
    CHECK_THROWS_AS(Topology::round_robin(2, 3), std::invalid_argument);
    CHECK_THROWS_AS(Topology::from_membership({0, 0, 2}, 3), std::invalid_argument);
    CHECK_THROWS_AS(best_of(Topology::global(2), ps), std::invalid_argument);
}

TEST_CASE("round_robin sizes differ by at most one") {
    for (std::size_t eta = 1; eta < 40; ++eta)
        for (std::size_t k = 1; k <= eta; ++k) {
            const auto sizes = Topology::round_robin(eta, k).neighborhood_sizes();
            const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
            CHECK(*hi - *lo <= 1);
            CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == eta);
        }
}

TEST_CASE("inertia schedule") {
    const InertiaSchedule w{};
    CHECK(w.at(0, 200) == 0.9);
    CHECK(w.at(199, 200) == doctest::Approx(0.4));
    CHECK(w.at(0, 1) == 0.9);
    CHECK(InertiaSchedule::constant(0.7).at(50, 100) == 0.7);
}

TEST_CASE("PsoConfig validation") {
    PsoConfig c;
    CHECK_NOTHROW(c.validate());
    c.swarm_size = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.ac1 = -1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.max_iters = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.v_max = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    CHECK(c.velocity_clamp(BoundingBox{{0, -1}, {1, 3}}) == std::vector<double>{0.5, 2.0});
    c.v_max = 0.1;
    CHECK(c.velocity_clamp(BoundingBox{{0, -1}, {1, 3}}) == std::vector<double>{0.1, 0.1});
}

TEST_CASE("Swarm on a sphere function: monotone pbest, clamped velocity, determinism") {
    PsoConfig cfg;
    cfg.swarm_size = 12;
    cfg.max_iters = 60;
    cfg.seed = 4;
    const BoundingBox box{{-5, -5, -5}, {5, 5, 5}};
    auto make = [&](Topology topology, VelocityRule rule) {
        Rng rng(cfg.seed);
        SwarmSetup setup{std::move(topology), rule, box, Matrix(12, 3), Matrix(12, 3)};
        for (double& v : setup.initial_positions.flat()) v = uniform(rng, -5, 5);
        for (double& v : setup.initial_pbest.flat()) v = uniform(rng, -5, 5);
        auto sphere = [](const Matrix& xs, std::span<double> out) {
            for (std::size_t i = 0; i < xs.rows(); ++i) {
                double s = 0;
                for (double x : xs.row(i)) s += (x - 1) * (x - 1);
                out[i] = s;
            }
        };
        return Swarm(cfg, std::move(setup), sphere, std::move(rng));
    };

    for (auto rule : {VelocityRule::inertia_social, VelocityRule::center_of_gravity}) {
        Swarm swarm = make(Topology::round_robin(12, 3), rule);
        std::vector<double> last(12, std::numeric_limits<double>::infinity());
        bool monotone = true, clamped = true, global_best_bound = true;
        std::vector<std::vector<double>> trajectory;
        swarm.run([&](const IterationView& view) {
            const auto g = best_of(Topology::global(view.particles.size()), view.particles);
            for (std::size_t i = 0; i < view.particles.size(); ++i) {
                monotone = monotone && view.particles[i].pbest_fitness <= last[i];
                last[i] = view.particles[i].pbest_fitness;
                global_best_bound = global_best_bound && view.particles[g].pbest_fitness <= last[i];
                for (double v : view.particles[i].velocity) clamped = clamped && std::abs(v) <= 5.0;
                trajectory.push_back(view.particles[i].position);
            }
        });
        CHECK(monotone);
        CHECK(clamped);
        CHECK(global_best_bound);
        CHECK(swarm.best_fitness_trace().size() == cfg.max_iters);
        for (std::size_t i = 1; i < swarm.best_fitness_trace().size(); ++i)
            CHECK(swarm.best_fitness_trace()[i] <= swarm.best_fitness_trace()[i - 1]);

        Swarm replay = make(Topology::round_robin(12, 3), rule);
        std::vector<std::vector<double>> again;
        replay.run([&](const IterationView& view) {
            for (const auto& p : view.particles) again.push_back(p.position);
        });
        CHECK(again == trajectory);
    }

    Swarm g = make(Topology::global(12), VelocityRule::inertia_social);
    g.run();
    CHECK(g.best_fitness_trace().back() < 1e-3);
}

}
