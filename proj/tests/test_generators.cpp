#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <string>

#include <propgen/counting.hpp>
#include <propgen/enumerate.hpp>
#include <propgen/generators.hpp>
#include <propgen/stats.hpp>

using namespace propgen;

namespace {

Signature not_and() { return Signature::parse("not:1,and:2"); }

AtomSet atoms_of(int p) {
    std::vector<std::string> names;
    for (int i = 1; i <= p; ++i)
        names.push_back("p" + std::to_string(i));
    return AtomSet(std::move(names));
}

EaDistribution dist(std::vector<std::pair<int, std::vector<int>>> parts) {
    EaDistribution d;
    for (auto& [depth, idx] : parts) {
        AtomSubset s;
        for (int i : idx)
            s.insert(i);
        d.parts.push_back({depth, s});
    }
    return d;
}

std::map<std::string, int> tally(GeneratorKind kind, int n, const AtomSet& atoms,
                                 const Signature& sig, int draws, std::uint64_t seed) {
    CountCache counts{sig};
    RandomSource rng{seed};
    std::map<std::string, int> observed;
    for (int i = 0; i < draws; ++i) {
        Formula f = [&] {
            switch (kind) {
                case GeneratorKind::es_biased: return gen_es_biased(n, atoms, sig, rng);
                case GeneratorKind::es_uniform: return gen_es_uniform(n, atoms, counts, rng);
                case GeneratorKind::us: return gen_us(n, atoms, counts, rng);
                case GeneratorKind::ea: return gen_ea(n, atoms, counts, rng);
            }
            throw std::logic_error("unreachable");
        }();
        ++observed[to_prefix(f)];
    }
    return observed;
}

} // namespace

TEST_CASE("atom subsets") {
    AtomSubset s = AtomSubset::full(3);
    CHECK(s.count() == 3);
    CHECK(s.indices() == std::vector<int>{0, 1, 2});
    s.erase(1);
    CHECK(s.indices() == std::vector<int>{0, 2});
    CHECK_FALSE(s.contains(1));
    s.insert(1);
    CHECK(s == AtomSubset::full(3));
    CHECK(AtomSubset{}.empty());
}

TEST_CASE("biased generator base case and postconditions") {
    Signature sig = not_and();
    AtomSet atoms = atoms_of(1);
    RandomSource rng{21};
    CHECK(to_prefix(gen_es_biased(0, atoms, sig, rng)) == "p1");

    AtomSet two = atoms_of(2);
    for (int trial = 0; trial < 200; ++trial) {
        int n = static_cast<int>(uniform_index(rng, 4));
        Formula f = gen_es_biased(n, two, sig, rng);
        REQUIRE(f.depth() == n);
        for (const auto& name : atoms_used(f))
            REQUIRE(two.index_of(name));
    }
}

TEST_CASE("biased generator rejects an empty signature at positive depth") {
    Signature empty{};
    AtomSet atoms = atoms_of(2);
    RandomSource rng{22};
    CHECK_NOTHROW(gen_es_biased(0, atoms, empty, rng));
    CHECK_THROWS_AS(gen_es_biased(1, atoms, empty, rng), empty_space_error);
}

TEST_CASE("biased generator reproduces the known skews") {
    // n=1, P={p1,p2}, C={not,and}: negations 0.25 each, conjunctions 0.125 each.
    auto observed = tally(GeneratorKind::es_biased, 1, atoms_of(2), not_and(), 60000, 31);
    CHECK_THAT(observed["not(p1)"] / 60000.0, Catch::Matchers::WithinAbs(0.25, 0.015));
    CHECK_THAT(observed["not(p2)"] / 60000.0, Catch::Matchers::WithinAbs(0.25, 0.015));
    CHECK_THAT(observed["and(p1,p2)"] / 60000.0, Catch::Matchers::WithinAbs(0.125, 0.015));
    CHECK_THAT(observed["and(p2,p2)"] / 60000.0, Catch::Matchers::WithinAbs(0.125, 0.015));

    // n=2, P={p1}, C={and}: the full binary tree shows up half the time.
    auto deep = tally(GeneratorKind::es_biased, 2, atoms_of(1), Signature::parse("and:2"),
                      60000, 32);
    CHECK_THAT(deep["and(and(p1,p1),p1)"] / 60000.0, Catch::Matchers::WithinAbs(0.25, 0.015));
    CHECK_THAT(deep["and(p1,and(p1,p1))"] / 60000.0, Catch::Matchers::WithinAbs(0.25, 0.015));
    CHECK_THAT(deep["and(and(p1,p1),and(p1,p1))"] / 60000.0,
               Catch::Matchers::WithinAbs(0.5, 0.015));
}

TEST_CASE("depth vector: single argument must reach n-1") {
    CountCache counts{not_and()};
    RandomSource rng{41};
    for (int n : {1, 2, 5})
        for (int i = 0; i < 20; ++i) {
            DepthVector dv = sample_exact_depth_vector(1, n, counts, 2, rng);
            REQUIRE(dv == DepthVector{n - 1});
        }
}

TEST_CASE("depth vector: n=1 forces all zeros") {
    CountCache counts{Signature::parse("and:2")};
    RandomSource rng{42};
    for (int i = 0; i < 20; ++i)
        REQUIRE(sample_exact_depth_vector(2, 1, counts, 2, rng) == DepthVector({0, 0}));
}

TEST_CASE("depth vector: m=2 n=2 p=1 over and:2 is uniform over the three vectors") {
    CountCache counts{Signature::parse("and:2")};
    RandomSource rng{43};
    std::map<DepthVector, int> observed;
    const int draws = 30000;
    for (int i = 0; i < draws; ++i)
        ++observed[sample_exact_depth_vector(2, 2, counts, 1, rng)];
    REQUIRE(observed.size() == 3);
    // weights are the q_es products 1,1,1 over denominator 2^2-1^2 = 3
    CHECK_THAT(observed[DepthVector{0, 1}] / double(draws),
               Catch::Matchers::WithinAbs(1.0 / 3.0, 0.02));
    CHECK_THAT(observed[DepthVector{1, 0}] / double(draws),
               Catch::Matchers::WithinAbs(1.0 / 3.0, 0.02));
    CHECK_THAT(observed[DepthVector{1, 1}] / double(draws),
               Catch::Matchers::WithinAbs(1.0 / 3.0, 0.02));
}

TEST_CASE("depth vector distribution matches the exact-depth weight law") {
    // Expected probability of (d_1..d_m): prod q_es(d_i, p) over T^m - U^m.
    Signature sig = not_and();
    CountCache counts{sig};
    const int p = 2;
    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 2}}) {
        BigCount t = counts.q_us(n - 1, p);
        BigCount u = counts.q_us(n - 2, p);
        BigCount denom = pow_count(t, m) - pow_count(u, m);
        std::map<DepthVector, double> expected;
        DepthVector dv(static_cast<std::size_t>(m), 0);
        for (;;) {
            bool reaches = false;
            for (int d : dv)
                reaches = reaches || d == n - 1;
            if (reaches) {
                BigCount w = 1;
                for (int d : dv)
                    w *= counts.q_es(d, p);
                expected[dv] = w.convert_to<double>() / denom.convert_to<double>();
            }
            int slot = m - 1;
            while (slot >= 0 && dv[static_cast<std::size_t>(slot)] == n - 1) {
                dv[static_cast<std::size_t>(slot)] = 0;
                --slot;
            }
            if (slot < 0)
                break;
            ++dv[static_cast<std::size_t>(slot)];
        }

        const int draws = 40000;
        RandomSource rng{static_cast<std::uint64_t>(100 * m + n)};
        std::map<DepthVector, int> observed;
        for (int i = 0; i < draws; ++i)
            ++observed[sample_exact_depth_vector(m, n, counts, p, rng)];

        double chi = 0.0;
        for (const auto& [vec, prob] : expected) {
            double e = prob * draws;
            double o = observed.count(vec) ? observed[vec] : 0;
            chi += (o - e) * (o - e) / e;
        }
        for (const auto& [vec, count] : observed)
            REQUIRE(expected.count(vec) == 1); // nothing outside the valid set
        INFO("m=" << m << " n=" << n << " chi=" << chi);
        CHECK(chi < chi_square_quantile(static_cast<int>(expected.size()) - 1, 0.999));
    }
}

TEST_CASE("uniform exact-depth generator on singleton and empty spaces") {
    Signature conj = Signature::parse("and:2");
    CountCache counts{conj};
    AtomSet one = atoms_of(1);
    RandomSource rng{51};
    for (int i = 0; i < 10; ++i)
        CHECK(to_prefix(gen_es_uniform(1, one, counts, rng)) == "and(p1,p1)");

    CountCache empty{Signature{}};
    CHECK_THROWS_AS(gen_es_uniform(1, one, empty, rng), empty_space_error);
    CHECK_NOTHROW(gen_es_uniform(0, one, empty, rng));
}

TEST_CASE("uniform exact-depth generator is uniform on the two reference settings") {
    auto a = run_uniformity_trial(GeneratorKind::es_uniform, 1, atoms_of(2), not_and(),
                                  30000, 61);
    CHECK(a.pass);
    for (const auto& row : a.rows)
        CHECK_THAT(row.observed / 30000.0, Catch::Matchers::WithinAbs(1.0 / 6.0, 0.01));

    auto b = run_uniformity_trial(GeneratorKind::es_uniform, 2, atoms_of(1),
                                  Signature::parse("and:2"), 30000, 62);
    CHECK(b.pass);
    for (const auto& row : b.rows)
        CHECK_THAT(row.observed / 30000.0, Catch::Matchers::WithinAbs(1.0 / 3.0, 0.015));
}

TEST_CASE("up-to generator base case and the two derived settings") {
    Signature sig = not_and();
    AtomSet two = atoms_of(2);
    auto base = tally(GeneratorKind::us, 0, two, sig, 20000, 71);
    CHECK_THAT(base["p1"] / 20000.0, Catch::Matchers::WithinAbs(0.5, 0.015));
    CHECK_THAT(base["p2"] / 20000.0, Catch::Matchers::WithinAbs(0.5, 0.015));

    auto one_atom = tally(GeneratorKind::us, 1, atoms_of(1), Signature::parse("and:2"),
                          20000, 72);
    CHECK_THAT(one_atom["p1"] / 20000.0, Catch::Matchers::WithinAbs(0.5, 0.02));
    CHECK_THAT(one_atom["and(p1,p1)"] / 20000.0, Catch::Matchers::WithinAbs(0.5, 0.02));

    auto eight = run_uniformity_trial(GeneratorKind::us, 1, two, sig, 40000, 73);
    CHECK(eight.pass);
    REQUIRE(eight.rows.size() == 8);
    for (const auto& row : eight.rows)
        CHECK_THAT(row.observed / 40000.0, Catch::Matchers::WithinAbs(0.125, 0.01));
}

TEST_CASE("distribution set for the all-atoms generator: reference case") {
    Signature sig = Signature::parse("not:1,and:2,or:2");
    AtomSet two = atoms_of(2);
    CountCache counts{sig};
    auto members = enumerate_ea_distributions(1, two, counts);

    auto find = [&](const EaDistribution& wanted) -> const WeightedEaDistribution* {
        for (const auto& m : members)
            if (m.distribution == wanted)
                return &m;
        return nullptr;
    };
    const auto* split12 = find(dist({{0, {0}}, {0, {1}}}));
    const auto* split21 = find(dist({{0, {1}}, {0, {0}}}));
    const auto* lumped = find(dist({{0, {0, 1}}}));
    REQUIRE(split12 != nullptr);
    REQUIRE(split21 != nullptr);
    REQUIRE(lumped != nullptr);
    CHECK(split12->weight == 2); // two binary connectives, q_ea(0,1)^2 = 1
    CHECK(split21->weight == 2);
    CHECK(lumped->weight == 0); // no depth-0 formula holds two atoms

    BigCount total = 0;
    for (const auto& m : members)
        total += m.weight;
    CHECK(total == counts.q_ea(1, 2));
    CHECK(total == 4);
}

TEST_CASE("distribution set: four atoms over and:2 forces depth vector (1,1)") {
    Signature sig = Signature::parse("and:2");
    AtomSet four = atoms_of(4);
    CountCache counts{sig};
    for (const auto& m : enumerate_ea_distributions(2, four, counts)) {
        if (m.weight == 0)
            continue;
        REQUIRE(m.distribution.parts.size() == 2);
        CHECK(m.distribution.parts[0].depth == 1);
        CHECK(m.distribution.parts[1].depth == 1);
    }
}

TEST_CASE("distribution weights always sum to the all-atoms count") {
    for (const char* text : {"and:2", "not:1,and:2", "not:1,and:2,or:2", "not:1,oplus:3"}) {
        Signature sig = Signature::parse(text);
        CountCache counts{sig};
        for (int p = 1; p <= 3; ++p) {
            AtomSet atoms = atoms_of(p);
            for (int n = 1; n <= 3; ++n) {
                if (BigCount(p) > counts.max_atoms(n))
                    continue;
                BigCount total = 0;
                for (const auto& m : enumerate_ea_distributions(n, atoms, counts))
                    total += m.weight;
                INFO(text << " n=" << n << " p=" << p);
                CHECK(total == counts.q_ea(n, p));
            }
        }
    }
}

TEST_CASE("distribution set capacity cap") {
    Signature sig = Signature::parse("not:1,and:2");
    AtomSet two = atoms_of(2);
    CountCache counts{sig};
    CHECK_THROWS_AS(enumerate_ea_distributions(2, two, counts, 3), capacity_error);
}

TEST_CASE("the staged sampler agrees with the materialized distribution set") {
    // Group the extensional members by (arity, depth vector): the sums must
    // equal the staged sampler's marginal weights, member for member.
    for (const char* text : {"not:1,and:2", "not:1,and:2,or:2", "and:2,xor:2,ite:3"}) {
        Signature sig = Signature::parse(text);
        CountCache counts{sig};
        for (int p = 1; p <= 3; ++p) {
            for (int n = 1; n <= 3; ++n) {
                if (BigCount(p) > counts.max_atoms(n))
                    continue;
                AtomSet atoms = atoms_of(p);
                std::map<std::pair<int, DepthVector>, BigCount> grouped;
                for (const auto& m :
                     enumerate_ea_distributions(n, atoms, counts, 2'000'000)) {
                    DepthVector dv;
                    for (const auto& part : m.distribution.parts)
                        dv.push_back(part.depth);
                    grouped[{static_cast<int>(dv.size()), dv}] += m.weight;
                }
                for (const auto& choice : detail::ea_depth_choices(n, p, counts)) {
                    auto it = grouped.find({choice.arity, choice.depths});
                    BigCount materialized = it == grouped.end() ? BigCount(0) : it->second;
                    INFO(text << " n=" << n << " p=" << p);
                    REQUIRE(choice.weight == materialized);
                }
            }
        }
    }
}

TEST_CASE("all-atoms generator: base case, infeasibility, reference uniformity") {
    Signature sig = not_and();
    CountCache counts{sig};
    RandomSource rng{81};
    CHECK(to_prefix(gen_ea(0, atoms_of(1), counts, rng)) == "p1");

    CountCache conj{Signature::parse("and:2")};
    try {
        gen_ea(1, atoms_of(3), conj, rng);
        FAIL("expected infeasible_error");
    } catch (const infeasible_error& e) {
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("2^1"));
    }
    CHECK_THROWS_AS(gen_ea(0, atoms_of(2), counts, rng), infeasible_error);

    auto report = run_uniformity_trial(GeneratorKind::ea, 2, AtomSet::parse("p"), sig,
                                       40000, 82);
    REQUIRE(report.rows.size() == 10); // q_es(2,1) = 13 - 3 = 10
    CHECK(report.pass);
    for (const auto& row : report.rows)
        CHECK_THAT(row.observed / 40000.0, Catch::Matchers::WithinAbs(0.1, 0.01));
}

TEST_CASE("all-atoms generator is uniform with several atoms and arities") {
    Signature sig = Signature::parse("and:2,or:2");
    AtomSet three = atoms_of(3);
    auto report = run_uniformity_trial(GeneratorKind::ea, 2, three, sig, 67200, 83);
    REQUIRE(report.rows.size() == 336);
    CHECK(report.pass);

    // ite over three distinct atoms: the 3! argument orders, uniform
    Signature mixed = Signature::parse("not:1,ite:3");
    auto orders = run_uniformity_trial(GeneratorKind::ea, 1, atoms_of(3), mixed, 12000, 84);
    REQUIRE(orders.rows.size() == 6);
    CHECK(orders.pass);
}

TEST_CASE("every formula of each small space is reachable") {
    struct Config {
        GeneratorKind kind;
        int n;
        int p;
        const char* sig;
    };
    for (const Config& c : {Config{GeneratorKind::es_biased, 1, 2, "not:1,and:2"},
                            Config{GeneratorKind::es_uniform, 1, 2, "not:1,and:2"},
                            Config{GeneratorKind::es_uniform, 2, 1, "and:2"},
                            Config{GeneratorKind::us, 1, 2, "not:1,and:2"},
                            Config{GeneratorKind::ea, 2, 1, "not:1,and:2"},
                            Config{GeneratorKind::ea, 1, 2, "not:1,and:2,or:2"}}) {
        Signature sig = Signature::parse(c.sig);
        AtomSet atoms = atoms_of(c.p);
        std::vector<Formula> space;
        switch (c.kind) {
            case GeneratorKind::es_biased:
            case GeneratorKind::es_uniform:
                space = enumerate_exact(c.n, atoms, sig);
                break;
            case GeneratorKind::us:
                space = enumerate_up_to(c.n, atoms, sig);
                break;
            case GeneratorKind::ea:
                space = enumerate_exact_all(c.n, atoms, sig);
                break;
        }
        REQUIRE(space.size() <= 50);
        auto observed = tally(c.kind, c.n, atoms, sig,
                              static_cast<int>(200 * space.size()), 90 + c.n);
        for (const Formula& f : space) {
            INFO(to_string(c.kind) << " n=" << c.n << " missing " << to_prefix(f));
            CHECK(observed[to_prefix(f)] > 0);
        }
    }
}

TEST_CASE("generator postconditions over randomized configurations") {
    RandomSource meta{20240918};
    for (int trial = 0; trial < 300; ++trial) {
        const int n = static_cast<int>(uniform_index(meta, 4));
        const int p = 1 + static_cast<int>(uniform_index(meta, 3));
        const int conn_count = 1 + static_cast<int>(uniform_index(meta, 3));
        std::vector<Signature::Connective> conns;
        for (int c = 0; c < conn_count; ++c)
            conns.push_back({"c" + std::to_string(c),
                             1 + static_cast<int>(uniform_index(meta, 3))});
        Signature sig{conns};
        AtomSet atoms = atoms_of(p);
        CountCache counts{sig};
        RandomSource rng{meta.next_word()};

        Formula biased = gen_es_biased(n, atoms, sig, rng);
        CHECK(biased.depth() == n);
        Formula es = gen_es_uniform(n, atoms, counts, rng);
        CHECK(es.depth() == n);
        Formula us = gen_us(n, atoms, counts, rng);
        CHECK(us.depth() <= n);
        for (const Formula* f : {&biased, &es, &us})
            for (const auto& name : atoms_used(*f))
                CHECK(atoms.index_of(name));

        if (BigCount(p) <= counts.max_atoms(n)) {
            Formula ea = gen_ea(n, atoms, counts, rng);
            CHECK(ea.depth() == n);
            CHECK(atoms_used(ea).size() == static_cast<std::size_t>(p));
        } else {
            CHECK_THROWS_AS(gen_ea(n, atoms, counts, rng), infeasible_error);
        }
    }
}

TEST_CASE("seeded generation replays identically") {
    Signature sig = Signature::parse("not:1,and:2,or:2");
    AtomSet atoms = atoms_of(3);
    auto run = [&](std::uint64_t seed) {
        CountCache counts{sig};
        RandomSource rng{seed};
        std::string log;
        for (int i = 0; i < 50; ++i) {
            log += to_prefix(gen_es_biased(2, atoms, sig, rng));
            log += to_prefix(gen_es_uniform(2, atoms, counts, rng));
            log += to_prefix(gen_us(3, atoms, counts, rng));
            log += to_prefix(gen_ea(2, atoms, counts, rng));
            log += '\n';
        }
        return log;
    };
    CHECK(run(12345) == run(12345));
    CHECK(run(12345) != run(54321));
}
