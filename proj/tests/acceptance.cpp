// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Tolerances are pinned in code next to each check.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "tensor1/autodiff.hpp"
#include "tensor1/cd.hpp"
#include "tensor1/errors.hpp"
#include "tensor1/kernels.hpp"
#include "tensor1/om_ast.hpp"
#include "tensor1/semantics.hpp"
#include "tensor1/tensor.hpp"
#include "tensor1/xml.hpp"

namespace fs = std::filesystem;
using namespace tensor1;

namespace {

const fs::path kCorpus = fs::path(TENSOR1_SOURCE_DIR) / "corpus";

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail = "") {
    std::printf("%s  %d. %s%s%s\n", pass ? "PASS" : "FAIL", number, name,
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass) ++g_failures;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

double max_abs_dev_from_identity(const Mat& m) {
    double worst = 0.0;
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j)
            worst = std::max(worst, std::fabs(m.at(i, j) - (i == j ? 1.0 : 0.0)));
    return worst;
}

struct BuiltinFrameSampler {
    std::mt19937_64 rng{20260809};

    std::vector<double> sample_point(const Chart& chart) {
        std::uniform_real_distribution<double> radius(0.2, 5.0);
        std::uniform_real_distribution<double> angle(-1.5, 1.5);
        std::uniform_real_distribution<double> coord(-4.0, 4.0);
        if (chart.name == "polar") return {radius(rng), angle(rng)};
        if (chart.name == "spherical")
            // polar angle kept away from the axis singularities
            return {radius(rng), M_PI / 2 + angle(rng) / 2, angle(rng)};
        std::vector<double> p(static_cast<std::size_t>(chart.dim));
        for (double& x : p) x = coord(rng);
        return p;
    }
};

// ---- criterion 1 ----
void criterion_duality_metric() {
    auto t0 = std::chrono::steady_clock::now();
    BuiltinFrameSampler sampler;
    const std::array<ChartPtr, 4> charts = {cartesian_chart(2), cartesian_chart(3), polar_chart(),
                                            spherical_chart()};
    double worst = 0.0;
    for (const ChartPtr& chart : charts) {
        for (int i = 0; i < 100; ++i) {
            FramePtr f = make_frame(chart, sampler.sample_point(*chart));
            worst = std::max(worst, max_abs_dev_from_identity(mat_mul(f->dual_basis, f->basis)));
            worst = std::max(worst,
                             max_abs_dev_from_identity(mat_mul(f->metric, f->inverse_metric)));
        }
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = worst <= 1e-9 && seconds < 5.0;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "max deviation %.3g (tol 1e-9), %.2fs (limit 5s)", worst,
                  seconds);
    report(1, "duality and metric identities on 100 random points per chart", pass, detail);
}

// ---- criterion 2 ----
void criterion_scalar_invariance() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> comp(-3.0, 3.0);
    BuiltinFrameSampler sampler;
    sampler.rng.seed(22);
    double worst = 0.0;

    for (int i = 0; i < 100; ++i) {
        // 2D: Cartesian vs polar
        {
            ChartPtr polar = polar_chart();
            std::vector<double> p = sampler.sample_point(*polar);
            FramePtr fp = make_frame(polar, p);
            FramePtr fc = make_frame(cartesian_chart(2), chart_to_cartesian(*polar, p));
            TensorValue v = make_tensor(2, {Variance::Contra}, {comp(rng), comp(rng)}, fc);
            double direct = norm_sq(v, fc);
            double transformed = norm_sq(transform(v, fp), fp);
            worst = std::max(worst, std::fabs(direct - transformed));
        }
        // 3D: Cartesian vs spherical
        {
            ChartPtr sph = spherical_chart();
            std::vector<double> p = sampler.sample_point(*sph);
            FramePtr fs = make_frame(sph, p);
            FramePtr fc = make_frame(cartesian_chart(3), chart_to_cartesian(*sph, p));
            TensorValue v =
                make_tensor(3, {Variance::Contra}, {comp(rng), comp(rng), comp(rng)}, fc);
            double direct = norm_sq(v, fc);
            double transformed = norm_sq(transform(v, fs), fs);
            worst = std::max(worst, std::fabs(direct - transformed));
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "max |norm difference| %.3g (tol 1e-8)", worst);
    report(2, "norm invariance under polar and spherical transformation, 100 pairs", worst <= 1e-8,
           detail);
}

// ---- criterion 3 ----
void criterion_kronecker_invariance() {
    BuiltinFrameSampler sampler;
    sampler.rng.seed(33);
    double worst = 0.0;
    for (int n : {2, 3}) {
        std::vector<ChartPtr> charts = {cartesian_chart(n)};
        if (n == 2) charts.push_back(polar_chart());
        if (n == 3) charts.push_back(spherical_chart());
        for (const ChartPtr& chart : charts) {
            for (int i = 0; i < 20; ++i) {
                FramePtr target = make_frame(chart, sampler.sample_point(*chart));
                FramePtr source = make_frame(cartesian_chart(n), target->cartesian_point);
                TensorValue k = with_frame(kronecker(n), source);
                TensorValue moved = transform(k, target);
                for (std::size_t c = 0; c < moved.components.size(); ++c)
                    worst = std::max(worst, std::fabs(moved.components[c] - k.components[c]));
            }
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "max component deviation %.3g (tol 1e-9)", worst);
    report(3, "Kronecker tensor is invariant under every built-in frame change, n=2,3",
           worst <= 1e-9, detail);
}

// ---- criterion 4 ----
void criterion_row_major_oracle() {
    sem::Environment env;
    sem::add_builtin_charts(env);
    bool pass = true;
    std::size_t checked = 0;
    for (int dim = 2; dim <= 3 && pass; ++dim) {
        for (int order = 1; order <= 3 && pass; ++order) {
            std::size_t total = kernels::ipow_index(dim, order);
            std::vector<double> comps(total);
            for (std::size_t c = 0; c < total; ++c) comps[c] = static_cast<double>(c);
            sem::Environment local;
            sem::add_builtin_charts(local);
            local.add_tensor("T", make_tensor(dim, Signature(static_cast<std::size_t>(order),
                                                             Variance::Contra),
                                              comps));
            oracles::odometer(dim, order, [&](const std::vector<long long>& idx, std::size_t count) {
                std::vector<om::NodePtr> indexes;
                for (long long v : idx)
                    indexes.push_back(om::apply(om::sym("tensor1", "contra_index"),
                                                {om::integer(v)}));
                om::NodePtr node = om::apply(
                    om::sym("tensor1", "tensor_selector"),
                    {om::var("T"), om::apply(om::sym("tensor1", "tuple"), std::move(indexes)),
                     om::sym("tensor1", "unspecified")});
                double got = sem::evaluate(*node, local).scalar();
                // zero tolerance: the component must be exactly the oracle's
                // enumeration position
                if (got != static_cast<double>(count)) pass = false;
                ++checked;
            });
        }
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%zu index tuples, zero tolerance", checked);
    report(4, "tensor_selector matches the odometer offset oracle exhaustively", pass, detail);
}

// ---- criterion 5 ----
void criterion_matvec() {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        int dim = 2 + static_cast<int>(rng() % 3);  // 2..4
        std::vector<std::vector<double>> m(static_cast<std::size_t>(dim),
                                           std::vector<double>(static_cast<std::size_t>(dim)));
        std::vector<double> flat, vdata(static_cast<std::size_t>(dim));
        for (auto& row : m)
            for (double& x : row) {
                x = dist(rng);
                flat.push_back(x);
            }
        for (double& x : vdata) x = dist(rng);

        TensorValue M = make_tensor(dim, {Variance::Contra, Variance::Covar}, flat);
        TensorValue v = make_tensor(dim, {Variance::Contra}, vdata);
        TensorValue u = contract(tensor_product(M, v), 1, 2);
        std::vector<double> want = oracles::dense_matvec(m, vdata);
        for (int i = 0; i < dim; ++i)
            worst = std::max(worst,
                             std::fabs(u.components[static_cast<std::size_t>(i)] -
                                       want[static_cast<std::size_t>(i)]));
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "max deviation %.3g (tol 1e-12)", worst);
    report(5, "contract(M (x) v) equals the dense matrix-vector oracle, 50 random cases",
           worst <= 1e-12, detail);
}

// ---- criterion 6 ----
void criterion_levi_cross_curl() {
    bool antisym = true;
    for (int n = 2; n <= 4; ++n) {
        TensorValue eps = levi_civita(n);
        oracles::odometer(n, n, [&](const std::vector<long long>& idx, std::size_t) {
            double base = eps.at(idx);
            if (base != static_cast<double>(oracles::permutation_sign(idx))) antisym = false;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    std::vector<long long> swapped = idx;
                    std::swap(swapped[static_cast<std::size_t>(a)],
                              swapped[static_cast<std::size_t>(b)]);
                    if (eps.at(swapped) != -base) antisym = false;
                }
        });
    }

    std::mt19937_64 rng(66);
    std::uniform_real_distribution<double> dist(-4.0, 4.0);
    FramePtr cart3 = make_frame(cartesian_chart(3), {0.0, 0.0, 0.0});
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> u{dist(rng), dist(rng), dist(rng)};
        std::vector<double> v{dist(rng), dist(rng), dist(rng)};
        TensorValue got = cross_product(make_tensor(3, {Variance::Contra}, u, cart3),
                                        make_tensor(3, {Variance::Contra}, v, cart3), cart3);
        std::vector<double> want = oracles::cross_classic(u, v);
        for (int i = 0; i < 3; ++i)
            worst = std::max(worst,
                             std::fabs(got.components[static_cast<std::size_t>(i)] -
                                       want[static_cast<std::size_t>(i)]));
    }

    Mat partials(3);
    partials.at(1, 0) = 1.0;   // d v^2 / d x^1 for v = (-y, x, 0)
    partials.at(0, 1) = -1.0;  // d v^1 / d x^2
    TensorValue curl = sem::check_curl_cartesian(partials, cart3);
    bool curl_exact = curl.components == std::vector<double>{0.0, 0.0, 2.0};

    bool pass = antisym && worst <= 1e-12 && curl_exact;
    char detail[128];
    std::snprintf(detail, sizeof(detail),
                  "antisymmetry %s, cross max dev %.3g (tol 1e-12), curl(-y,x,0) %s",
                  antisym ? "holds" : "BROKEN", worst, curl_exact ? "= (0,0,2)" : "WRONG");
    report(6, "Levi-Civita antisymmetry, cross product and Cartesian curl", pass, detail);
}

// ---- criterion 7 ----
void criterion_autodiff_fd() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coord(0.5, 2.0);
    int samples = 0;
    bool pass = true;
    double worst_ratio = 0.0;
    while (samples < 200) {
        int arity = 1 + static_cast<int>(rng() % 3);
        oracles::ExprGen gen(rng, arity);
        ad::ExprPtr e = gen.sample(3);
        std::vector<double> p(static_cast<std::size_t>(arity));
        for (double& x : p) x = coord(rng);
        ad::Dual g = ad::eval_gradient(*e, p);
        if (!std::isfinite(g.value()) || std::fabs(g.value()) > 1e6) continue;
        bool usable = true;
        for (double d : g.partials())
            if (!std::isfinite(d) || std::fabs(d) > 1e6) usable = false;
        if (!usable) continue;
        for (int s = 0; s < arity; ++s) {
            double ad_val = g.partials()[static_cast<std::size_t>(s)];
            double fd_val = oracles::fd_partial(*e, p, static_cast<std::size_t>(s));
            // tolerance: 1e-5 relative or 1e-8 absolute, whichever is looser
            double tol = std::max(1e-8, 1e-5 * std::max(std::fabs(ad_val), std::fabs(fd_val)));
            double err = std::fabs(ad_val - fd_val);
            worst_ratio = std::max(worst_ratio, err / tol);
            if (err > tol) pass = false;
        }
        ++samples;
    }
    char detail[96];
    std::snprintf(detail, sizeof(detail), "200 samples, worst error/tolerance ratio %.3g",
                  worst_ratio);
    report(7, "dual-number derivatives match central finite differences", pass, detail);
}

// ---- criterion 8 ----
void criterion_corpus() {
    bool pass = true;
    std::size_t golden = 0;
    for (const auto& entry : fs::directory_iterator(kCorpus / "valid")) {
        if (entry.path().extension() != ".om") continue;
        ++golden;
        try {
            om::NodePtr parsed = om::parse_xml(slurp(entry.path()));
            om::NodePtr again = om::parse_xml(om::serialize_xml(*parsed));
            if (!om::structurally_equal(*parsed, *again)) pass = false;
        } catch (const EngineError&) {
            pass = false;
        }
    }
    if (golden == 0) pass = false;

    nlohmann::json manifest = nlohmann::json::parse(slurp(kCorpus / "invalid" / "manifest.json"));
    sem::Environment env = sem::load_environment_file(
        (kCorpus / "invalid" / manifest.at("env").get<std::string>()).lexically_normal().string());
    std::size_t negatives = 0;
    bool has_einstein = false, has_index_count = false;
    for (const auto& [file, expect] : manifest.at("cases").items()) {
        ++negatives;
        std::string want = expect.at("code").get<std::string>();
        if (want == "ImplicitEinstein") has_einstein = true;
        if (want == "IndexCountMismatch") has_index_count = true;
        std::string text = slurp(kCorpus / "invalid" / file);
        bool found = false;
        try {
            om::NodePtr node = file.size() > 4 && file.substr(file.size() - 4) == ".omc"
                                   ? om::parse_compact(text)
                                   : om::parse_xml(text);
            for (const auto& d : sem::validate(*node, env))
                if (errc_name(d.code) == want) found = true;
        } catch (const EngineError& e) {
            found = errc_name(e.code()) == want;
        }
        if (!found) pass = false;
    }
    if (negatives < 10 || !has_einstein || !has_index_count) pass = false;

    char detail[96];
    std::snprintf(detail, sizeof(detail), "%zu golden files, %zu negative cases", golden,
                  negatives);
    report(8, "parser round-trip on the golden corpus; negative corpus diagnostics", pass, detail);
}

// ---- criterion 9 ----
void criterion_cd_emission() {
    std::string a = emit_tensor1_cd();
    std::string b = emit_tensor1_cd();
    bool stable = a == b;

    bool well_formed = true;
    std::size_t definitions = 0;
    std::vector<std::string> names;
    try {
        xml::Element cd = xml::parse(a);
        well_formed = cd.name == "CD";
        for (const auto& child : cd.children) {
            if (child.name != "CDDefinition") continue;
            ++definitions;
            for (const auto& field : child.children)
                if (field.name == "Name") names.push_back(field.text);
        }
    } catch (const EngineError&) {
        well_formed = false;
    }

    const std::vector<std::string>& expected = om::tensor1_symbols();
    bool names_match = names.size() == 11;
    for (const std::string& want : expected)
        if (std::find(names.begin(), names.end(), want) == names.end()) names_match = false;

    bool pass = stable && well_formed && definitions == 11 && names_match;
    char detail[96];
    std::snprintf(detail, sizeof(detail), "%zu definitions, byte-stable: %s", definitions,
                  stable ? "yes" : "no");
    report(9, "content dictionary emission: 11 symbols, well-formed, byte-identical", pass,
           detail);
}

}  // namespace

int main() {
    std::printf("tensor1 acceptance suite\n");
    criterion_duality_metric();
    criterion_scalar_invariance();
    criterion_kronecker_invariance();
    criterion_row_major_oracle();
    criterion_matvec();
    criterion_levi_cross_curl();
    criterion_autodiff_fd();
    criterion_corpus();
    criterion_cd_emission();
    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures;
}
