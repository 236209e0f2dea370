#include <doctest.h>

#include <cmath>
#include <functional>

#include "denfg/errors.hpp"
#include "denfg/factorgraph.hpp"
#include "denfg/permanent.hpp"
#include "denfg/spa.hpp"
#include "test_util.hpp"

using namespace denfg;
using namespace denfg::test;

namespace {

void for_each_message(const MessageState& st,
                      const std::function<void(const Message&)>& fn) {
    for (const auto& m : st.edge_to_lcheck) fn(m);
    for (const auto& m : st.lcheck_to_edge) fn(m);
    for (const auto& m : st.rcheck_to_edge) fn(m);
    for (const auto& m : st.edge_to_rcheck) fn(m);
}

MessageState make_state(const ComplexMatrix& theta, InitMode mode,
                        std::uint64_t seed) {
    SpaConfig cfg;
    cfg.init_mode = mode;
    Rng rng(seed);
    return init_messages(build_denfg(theta), cfg, rng);
}

// Straightforward reference evaluation of the free energy: every entry via
// the principal complex log, conjugate pairs joined through 2 Re.
double direct_free_energy(const Beliefs& b, const DenfgModel& model) {
    const std::size_t n = b.n;
    auto entropy = [](const std::vector<cplx>& mat, std::size_t dim) {
        double h = 0.0;
        for (std::size_t l = 0; l < dim; ++l) {
            const double d = mat[l * dim + l].real();
            if (d > 0.0) h -= d * std::log(d);
            for (std::size_t k = l + 1; k < dim; ++k) {
                const cplx v = mat[l * dim + k];
                if (std::abs(v) > 0.0) h -= 2.0 * (v * std::log(v)).real();
            }
        }
        return h;
    };
    double u = 0.0, h = 0.0;
    for (std::size_t i = 0; i < n; ++i) h += entropy(b.left[i], n);
    for (std::size_t j = 0; j < n; ++j) h += entropy(b.right[j], n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Mat2& be = b.edge[i * n + j];
            const Mat2& w = model.weight(i, j);
            h -= entropy({be.a00, be.a01, be.a10, be.a11}, 2);
            if (std::abs(be.a00) > 1e-12)
                u -= (be.a00 * std::log(w.a00)).real();
            if (std::abs(be.a11) > 1e-12)
                u -= (be.a11 * std::log(w.a11)).real();
            if (std::abs(be.a10) > 0.0)
                u -= 2.0 * (be.a10 * std::log(w.a10)).real();
        }
    return u - h;
}

} // namespace

TEST_SUITE_BEGIN("spa");

TEST_CASE("initialization modes") {
    const auto theta = random_matrix(3, 50);

    const auto rank2 = make_state(theta, InitMode::RandomPsdRank2, 1);
    for_each_message(rank2, [](const Message& m) {
        CHECK(m.as_mat2().herm_defect() < 1e-12);
        CHECK(m.as_mat2().min_eig_herm() > -1e-10);
        CHECK(m.delta.imag() == 0.0);
        CHECK(m.delta.real() >= -1e-12);
    });
    for (const auto& m : rank2.edge_to_lcheck) CHECK(m.m00 == cplx{1.0, 0.0});

    const auto rank1 = make_state(theta, InitMode::Rank1, 2);
    for_each_message(rank1,
                     [](const Message& m) { CHECK(std::abs(m.delta) < 1e-12); });

    const auto diag = make_state(theta, InitMode::Diagonal, 3);
    for_each_message(diag, [](const Message& m) {
        CHECK(m.m01 == cplx{0.0, 0.0});
        CHECK(m.m10 == cplx{0.0, 0.0});
    });
}

TEST_CASE("a fixed point stays fixed") {
    const auto theta = random_matrix(3, 61, 0.4);
    const auto model = build_denfg(theta);
    SpaConfig cfg;
    cfg.seed = 5;
    Rng rng(cfg.seed);
    MessageState st = init_messages(model, cfg, rng);
    double metric = 1.0;
    for (int it = 0; it < cfg.max_iters && metric >= cfg.conv_tol; ++it)
        metric = spa_step(st, model, cfg);
    REQUIRE(metric < cfg.conv_tol);
    CHECK(spa_step(st, model, cfg) < cfg.conv_tol);
}

TEST_CASE("rank-1 deltas survive a step and long runs at eps = 0") {
    const auto theta = random_matrix(3, 70, 0.0);
    const auto model = build_denfg(theta);
    SpaConfig cfg;
    cfg.init_mode = InitMode::Rank1;
    Rng rng(9);
    MessageState st = init_messages(model, cfg, rng);
    spa_step(st, model, cfg);
    for_each_message(st,
                     [](const Message& m) { CHECK(std::abs(m.delta) < 1e-10); });
    for (int it = 0; it < 999; ++it) spa_step(st, model, cfg);
    for_each_message(st,
                     [](const Message& m) { CHECK(std::abs(m.delta) < 1e-10); });
}

TEST_CASE("diagonal messages stay exactly diagonal") {
    const auto theta = random_matrix(3, 80);
    const auto model = build_denfg(theta);
    SpaConfig cfg;
    cfg.init_mode = InitMode::Diagonal;
    Rng rng(10);
    MessageState st = init_messages(model, cfg, rng);
    for (int it = 0; it < 50; ++it) spa_step(st, model, cfg);
    for_each_message(st, [](const Message& m) {
        CHECK(m.m01 == cplx{0.0, 0.0});
        CHECK(m.m10 == cplx{0.0, 0.0});
    });
}

TEST_CASE("Hermitian PSD messages stay Hermitian PSD") {
    const auto theta = random_matrix(3, 90);
    const auto model = build_denfg(theta);
    SpaConfig cfg;
    Rng rng(11);
    MessageState st = init_messages(model, cfg, rng);
    for (int it = 0; it < 50; ++it) {
        spa_step(st, model, cfg);
        for_each_message(st, [](const Message& m) {
            CHECK(m.as_mat2().herm_defect() < 1e-8);
            CHECK(m.as_mat2().min_eig_herm() > -1e-8);
        });
    }
}

TEST_CASE("single-pair model is acyclic: undamped run converges in 2 steps") {
    const cplx c{0.9, 0.4};
    const auto model = build_denfg(ComplexMatrix{{c}});
    SpaConfig cfg;
    cfg.damping = 1.0;  // pure updates
    Rng rng(12);
    MessageState st = init_messages(model, cfg, rng);
    spa_step(st, model, cfg);
    CHECK(spa_step(st, model, cfg) < cfg.conv_tol);
}

TEST_CASE("single-pair model value is exact for every epsilon") {
    for (std::uint64_t t = 0; t < 5; ++t) {
        const auto theta = random_matrix(1, 130 + t);
        const auto eps = random_matrix(1, 230 + t).abs2();
        const auto model = build_denfg(theta, eps);
        SpaConfig cfg;
        cfg.seed = 14 + t;
        const SpaResult res = run_spa(model, cfg);
        CHECK(res.converged);
        CHECK(rel_err(res.zb_spa, partition_sum_denfg_bruteforce(model)) <
              1e-9);
    }
}

TEST_CASE("beliefs at the single-pair fixed point") {
    const cplx c{1.4, 0.2};
    const double eps = 0.7;
    const auto model = build_denfg(ComplexMatrix{{c}}, ComplexMatrix{{eps}});
    SpaConfig cfg;
    cfg.seed = 2;
    const SpaResult res = run_spa(model, cfg);
    REQUIRE(res.converged);
    CHECK(std::abs(res.beliefs.left[0][0] - cplx{1.0, 0.0}) < 1e-9);
    CHECK(std::abs(res.beliefs.right[0][0] - cplx{1.0, 0.0}) < 1e-9);
    // All mass on the doubly selected slot.
    CHECK(std::abs(res.beliefs.edge[0].a11 - cplx{1.0, 0.0}) < 1e-9);
    CHECK(std::abs(res.beliefs.edge[0].a00) < 1e-9);
}

TEST_CASE("edge consistency holds at fixed points") {
    for (double alpha : {0.0, kPi / 2, kPi}) {
        const auto theta = random_matrix(3, 555, alpha);
        SpaConfig cfg;
        cfg.seed = 33;
        const SpaResult res = run_spa(build_denfg(theta), cfg);
        if (!res.converged) continue;
        CHECK(res.consistency_residual < 1e-6);
        // Explicit marginalization of the node beliefs.
        const Beliefs& b = res.beliefs;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                cplx corner{0.0, 0.0};
                for (std::size_t l = 0; l < 3; ++l)
                    for (std::size_t k = 0; k < 3; ++k)
                        if (l != j && k != j) corner += b.left[i][l * 3 + k];
                CHECK(std::abs(corner - b.edge[i * 3 + j].a00) < 1e-8);
                CHECK(std::abs(b.left[i][j * 3 + j] - b.edge[i * 3 + j].a11) <
                      1e-8);
            }
    }
}

TEST_CASE("degeneracy classification") {
    // Hand-built states exercise the thresholds and the rank-1 tie-break.
    MessageState st;
    st.n = 1;
    Message generic;
    generic.m00 = cplx{1.0, 0.0};
    generic.m01 = cplx{1.0, 0.0};
    generic.m10 = cplx{1.0, 0.0};
    generic.m11 = cplx{2.0, 0.0};
    generic.delta = cplx{1.0, 0.0};
    st.edge_to_lcheck = {generic};
    st.lcheck_to_edge = {generic};
    st.rcheck_to_edge = {generic};
    st.edge_to_rcheck = {generic};
    CHECK(classify_degeneracy(st) == Degeneracy::Generic);

    Message diag_rank1;  // diagonal and rank-1: rank-1 wins the tie-break
    diag_rank1.m00 = cplx{1.0, 0.0};
    diag_rank1.m11 = cplx{0.0, 0.0};
    diag_rank1.delta = cplx{0.0, 0.0};
    st.edge_to_lcheck = {diag_rank1};
    st.lcheck_to_edge = {diag_rank1};
    st.rcheck_to_edge = {diag_rank1};
    st.edge_to_rcheck = {diag_rank1};
    CHECK(classify_degeneracy(st) == Degeneracy::Rank1);

    Message diag;
    diag.m00 = cplx{1.0, 0.0};
    diag.m11 = cplx{2.0, 0.0};
    diag.delta = cplx{2.0, 0.0};
    st.edge_to_lcheck = {diag};
    st.lcheck_to_edge = {diag};
    st.rcheck_to_edge = {diag};
    st.edge_to_rcheck = {diag};
    CHECK(classify_degeneracy(st) == Degeneracy::Diagonal);
}

TEST_CASE("degenerate runs reach the degenerate classes") {
    // Non-negative real entries: rank-2 init still lands on rank-1 messages.
    {
        const auto theta = random_matrix(6, 333, 0.0);
        SpaConfig cfg;
        cfg.seed = 77;
        const SpaResult res = run_spa(build_denfg(theta), cfg);
        REQUIRE(res.converged);
        CHECK(res.degeneracy == Degeneracy::Rank1);
    }
    // Diagonal init is closed, so the reached class is diagonal (or the
    // stricter rank-1).
    {
        const auto theta = random_matrix(4, 334);
        SpaConfig cfg;
        cfg.seed = 78;
        cfg.init_mode = InitMode::Diagonal;
        const SpaResult res = run_spa(build_denfg(theta), cfg);
        CHECK(res.degeneracy != Degeneracy::Generic);
    }
}

TEST_CASE("free energy agrees with a direct evaluation") {
    for (double alpha : {0.0, kPi}) {
        const auto theta = random_matrix(3, 400, alpha);
        const auto model = build_denfg(theta);
        SpaConfig cfg;
        cfg.seed = 41;
        const SpaResult res = run_spa(model, cfg);
        const EnergyTerms terms = bethe_free_energy(res.beliefs, model);
        CHECK(rel_err(terms.free_energy, direct_free_energy(res.beliefs, model)) <
              1e-12);
        CHECK(terms.imag_residue < 1e-7 * (1.0 + std::abs(terms.free_energy)));
        CHECK_FALSE(terms.branch_cut_warning);
    }
}

TEST_CASE("hand-built uniform-diagonal beliefs on the all-ones model") {
    const auto model = build_denfg(ComplexMatrix::all_ones(2));
    Beliefs b;
    b.n = 2;
    // Node beliefs uniform over the two diagonal slots, edge beliefs
    // uniform over the matching diagonal.
    b.left = {{cplx{0.5, 0}, {}, {}, cplx{0.5, 0}},
              {cplx{0.5, 0}, {}, {}, cplx{0.5, 0}}};
    b.right = b.left;
    Mat2 be{cplx{0.5, 0.0}, {}, {}, cplx{0.5, 0.0}};
    b.edge = {be, be, be, be};

    const EnergyTerms terms = bethe_free_energy(b, model);
    CHECK(rel_err(terms.free_energy, direct_free_energy(b, model)) < 1e-12);
    // ln W = 0 everywhere on the all-ones model, so U vanishes and
    // H = 4 * ln 2 - 4 * ln 2 = 0... with the edge entropies subtracted.
    CHECK(terms.average_energy == 0.0);
    CHECK(terms.entropy == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("free energy rejects belief mass on zero weights") {
    const auto model = build_denfg(ComplexMatrix::zero(1),
                                   ComplexMatrix{{0.5}});  // W = diag(1, 1/2)
    Beliefs b;
    b.n = 1;
    b.left = {{cplx{1.0, 0.0}}};
    b.right = {{cplx{1.0, 0.0}}};
    b.edge = {Mat2{cplx{0.25, 0}, cplx{0.25, 0}, cplx{0.25, 0}, cplx{0.25, 0}}};
    CHECK_THROWS_AS((void)bethe_free_energy(b, model), numeric_error);
}

TEST_CASE("renormalizing a message mid-run leaves the value unchanged") {
    const auto theta = random_matrix(3, 456);
    const auto model = build_denfg(theta);
    SpaConfig cfg;
    cfg.seed = 3;

    auto run_from = [&](bool rescale) {
        Rng rng(derive_key(cfg.seed, 0x5bd1e995u));
        MessageState st = init_messages(model, cfg, rng);
        double metric = 1.0;
        for (int it = 0; it < 8; ++it) metric = spa_step(st, model, cfg);
        if (rescale) {
            Message& m = st.edge_to_lcheck[4];
            const double s = 3.7;
            m.m00 *= s;
            m.m01 *= s;
            m.m10 *= s;
            m.m11 *= s;
            m.delta *= s * s;
        }
        for (int it = 0; it < cfg.max_iters && metric >= cfg.conv_tol; ++it)
            metric = spa_step(st, model, cfg);
        const Beliefs b = beliefs_from_messages(st, model);
        return std::exp(-bethe_free_energy(b, model).free_energy);
    };
    CHECK(rel_err(run_from(false), run_from(true)) < 1e-9);
}

TEST_CASE("zero entries are rejected unless perturbation is requested") {
    ComplexMatrix theta = random_matrix(2, 77);
    theta(0, 1) = cplx{0.0, 0.0};
    SpaConfig cfg;
    CHECK_THROWS_AS((void)run_spa(build_denfg(theta), cfg), domain_error);
    cfg.zero_perturb = true;
    const SpaResult res = run_spa(build_denfg(theta), cfg);
    CHECK(std::isfinite(res.zb_spa));
    // Nonzero epsilon also lifts the restriction.
    ComplexMatrix eps(2);
    eps(0, 1) = cplx{0.5, 0.0};
    cfg.zero_perturb = false;
    CHECK(std::isfinite(run_spa(build_denfg(theta, eps), cfg).zb_spa));
}

TEST_CASE("non-convergence is reported, not thrown") {
    const auto theta = random_matrix(4, 92);
    SpaConfig cfg;
    cfg.max_iters = 1;
    const SpaResult res = run_spa(build_denfg(theta), cfg);
    CHECK_FALSE(res.converged);
    CHECK(res.iterations == 1);
}

TEST_CASE("invalid configurations are rejected") {
    SpaConfig cfg;
    cfg.damping = 1.5;
    CHECK_THROWS_AS(cfg.validate(), domain_error);
    cfg.damping = 0.5;
    cfg.conv_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), domain_error);
}

TEST_CASE("scalar graph value on a single pair") {
    const cplx c{0.7, -1.1};
    SpaConfig cfg;
    const ScalarSpaResult res = spa_nfg_scalar(ComplexMatrix{{c}}, cfg);
    CHECK(res.converged);
    CHECK(rel_err(res.perm_b, c) < 1e-10);
}

TEST_CASE("scalar value lower-bounds the permanent for non-negative entries") {
    for (std::size_t n = 2; n <= 4; ++n)
        for (std::uint64_t t = 0; t < 6; ++t) {
            const auto theta = random_matrix(n, 900 * n + t, 0.0);
            SpaConfig cfg;
            const ScalarSpaResult res = spa_nfg_scalar(theta, cfg);
            REQUIRE(res.converged);
            CHECK(res.perm_b.imag() == doctest::Approx(0.0).epsilon(1e-12));
            CHECK(res.perm_b.real() <=
                  perm_ryser(theta).real() * (1.0 + 1e-6));
        }
}

TEST_CASE("rank-1 double-edge fixed point squares the scalar value") {
    for (std::uint64_t t = 0; t < 4; ++t) {
        const auto theta = random_matrix(4, 950 + t, 0.0);
        SpaConfig cfg;
        cfg.seed = 5 + t;
        const ScalarSpaResult scalar = spa_nfg_scalar(theta, cfg);
        cfg.init_mode = InitMode::Rank1;
        const SpaResult de = run_spa(build_denfg(theta), cfg);
        REQUIRE(scalar.converged);
        REQUIRE(de.converged);
        CHECK(std::abs(de.zb_spa / std::norm(scalar.perm_b) - 1.0) < 1e-6);
    }
}

TEST_CASE("scalar graph rejects zero entries") {
    ComplexMatrix theta = random_matrix(2, 1000);
    theta(1, 0) = cplx{0.0, 0.0};
    SpaConfig cfg;
    CHECK_THROWS_AS((void)spa_nfg_scalar(theta, cfg), domain_error);
}

TEST_SUITE_END();
