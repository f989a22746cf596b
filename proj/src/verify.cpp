#include "census/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace census {

bool VerifyReport::passed() const {
    return std::all_of(items.begin(), items.end(), [](const VerifyItem& i) { return i.passed; });
}

namespace {

bool close(const InversiveCircle& x, const InversiveCircle& y, double tol = Tolerances::geometric) {
    const auto cx = x.coefficients(), cy = y.coefficients();
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::abs(cx[i] - cy[i]) > tol * std::max(1.0, std::abs(cx[i]))) return false;
    }
    return true;
}

std::array<ExtPoint, 3> sample_points(const InversiveCircle& c) {
    if (c.is_line()) {
        const Complex b = c.b();
        const Complex foot = -c.c() * b / (2.0 * std::norm(b));
        const Complex dir = Complex(0, 1) * b / std::abs(b);
        return {ExtPoint(foot - dir), ExtPoint(foot + 0.5 * dir), ExtPoint::infinity()};
    }
    const Complex z0 = c.center();
    const double r = c.radius();
    return {ExtPoint(z0 + std::polar(r, 0.3)), ExtPoint(z0 + std::polar(r, 2.1)), ExtPoint(z0 + std::polar(r, 4.2))};
}

InversiveCircle three_point_image(const MotionMap& g, const InversiveCircle& c) {
    const auto pts = sample_points(c);
    return circle_through_points(apply_map_point(g, pts[0]), apply_map_point(g, pts[1]), apply_map_point(g, pts[2]));
}

std::vector<MotionMap> letters_of(const GroupSpec& spec) {
    std::vector<MotionMap> out;
    for (const auto& g : spec.generators) {
        out.push_back(g);
        const MotionMap inv = g.inverse();
        if (!inv.same_as(g)) out.push_back(inv);
    }
    return out;
}

VerifyItem check_curvature_identities(const GroupSpec& spec) {
    std::vector<InversiveCircle> circles = spec.seeds;
    for (const auto& g : letters_of(spec)) {
        for (const auto& s : spec.seeds) circles.push_back(apply_map_circle(g, s));
    }
    double worst = 0;
    for (const auto& c : circles) {
        const double k = spherical_curvature(c);
        const double cot = 1.0 / std::tan(to_spherical(c).theta);
        const double sh = std::sinh(hyperbolic_distance_to_center(c));
        worst = std::max({worst, std::abs(k - cot) / std::max(1.0, k), std::abs(k - sh) / std::max(1.0, k)});
    }
    std::ostringstream os;
    os << circles.size() << " circles, worst relative gap " << worst;
    return {"curvature-identities", worst <= Tolerances::geometric, os.str()};
}

VerifyItem check_action_oracle(const GroupSpec& spec) {
    int total = 0, bad = 0;
    for (const auto& g : letters_of(spec)) {
        for (const auto& s : spec.seeds) {
            ++total;
            if (!close(apply_map_circle(g, s), three_point_image(g, s))) ++bad;
        }
    }
    return {"action-oracle", bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " images agree"};
}

VerifyItem check_homomorphism(const GroupSpec& spec) {
    const auto letters = letters_of(spec);
    int total = 0, bad = 0;
    for (const auto& g1 : letters) {
        for (const auto& g2 : letters) {
            for (const auto& s : spec.seeds) {
                ++total;
                if (!close(apply_map_circle(compose(g1, g2), s), apply_map_circle(g1, apply_map_circle(g2, s)))) ++bad;
            }
        }
    }
    return {"homomorphism", bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " compositions agree"};
}

void schottky_family_checks(const GroupSpec& spec, std::vector<VerifyItem>& out) {
    const SchottkyData* data = spec.schottky();
    if (data == nullptr) return;
    bool pairing_ok = true, escape_ok = true;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < data->pairs.size(); ++i) {
        const auto& [src, dst] = data->pairs[i];
        const MotionMap& g = spec.generators[i];
        pairing_ok = pairing_ok && canonical_key(apply_map_circle(g, src.boundary())) == canonical_key(dst.boundary());
        for (int k = 0; k < 100; ++k) {
            const Complex p = src.center + std::polar(0.999 * src.radius * std::sqrt(unit(rng)), 2 * std::numbers::pi * unit(rng));
            const ExtPoint q = apply_map_point(g, p);
            if (!q.at_infinity && std::abs(q.z - dst.center) <= dst.radius) escape_ok = false;
        }
    }
    out.push_back({"schottky-boundary-pairing", pairing_ok, "generators map source circles onto target circles"});
    out.push_back({"schottky-interior-to-exterior", escape_ok, "100 interior samples per pair land outside the target disk"});
}

void apollonian_family_checks(const GroupSpec& spec, std::vector<VerifyItem>& out) {
    const ApollonianData* data = spec.apollonian();
    if (data == nullptr) return;
    bool involutive = true, fixes = true, tangent = true;
    for (std::size_t i = 0; i < spec.generators.size() && i < 4; ++i) {
        const MotionMap& g = spec.generators[i];
        involutive = involutive && compose(g, g).same_as(MotionMap::identity());
        const InversiveCircle image = apply_map_circle(g, data->root[i]);
        for (std::size_t j = 0; j < 4; ++j) {
            if (j == i) continue;
            fixes = fixes && canonical_key(apply_map_circle(g, data->root[j])) == canonical_key(data->root[j]);
            tangent = tangent &&
                      std::abs(std::abs(inversive_product(image, data->root[j])) - 1.0) < Tolerances::geometric;
        }
    }
    out.push_back({"apollonian-involutions", involutive, "generators square to the identity"});
    out.push_back({"apollonian-fixes-three", fixes, "generator i fixes the three roots other than i"});
    out.push_back({"apollonian-new-circle-tangent", tangent, "image of root i is tangent to the other three"});
}

void modular_family_checks(const GroupSpec& spec, std::vector<VerifyItem>& out) {
    const MotionMap& s = spec.generators.at(0);
    const MotionMap& t = spec.generators.at(1);
    const MotionMap st = compose(s, t);
    const bool ok = compose(s, s).same_as(MotionMap::identity()) && compose(st, compose(st, st)).same_as(MotionMap::identity());
    out.push_back({"modular-relations", ok, "S^2 = (ST)^3 = identity"});
}

std::vector<VerifyItem> enumeration_checks(const GroupSpec& spec, const EnumOptions& base, unsigned threads) {
    std::vector<VerifyItem> out;
    EnumOptions opts = base;
    opts.t_max = std::min(base.t_max, kVerifyTMax);
    opts.threads = 1;
    const PackingOrbit full = enumerate_orbit(spec, opts);
    if (!full.exhaustive) {
        out.push_back({"enumeration-complete", false, "enumeration at t_max " + std::to_string(opts.t_max) +
                                                          " did not finish (budget or depth limit)"});
        return out;
    }
    out.push_back({"enumeration-complete", true, std::to_string(full.records.size()) + " circles below t_max " +
                                                     std::to_string(opts.t_max)});

    KeyStore store(opts.dedup_quantum);
    for (std::uint32_t i = 0; i < full.records.size(); ++i) store.insert_if_absent(full.records[i].circle, i);

    int missing = 0;
    for (const auto& rec : full.records) {
        for (const auto& g : letters_of(spec)) {
            const InversiveCircle image = apply_map_circle(g, rec.circle);
            if (spherical_curvature(image) < opts.t_max && !store.find(image)) ++missing;
        }
    }
    out.push_back({"enumeration-invariance", missing == 0,
                   std::to_string(missing) + " generator images below t_max missing from the orbit"});

    EnumOptions half = opts;
    half.t_max = opts.t_max / 2;
    const PackingOrbit smaller = enumerate_orbit(spec, half);
    int outside = 0;
    for (const auto& rec : smaller.records) {
        if (!store.find(rec.circle)) ++outside;
    }
    out.push_back({"enumeration-monotone", outside == 0,
                   std::to_string(outside) + " circles of the half-threshold orbit missing from the full one"});

    EnumOptions parallel = opts;
    parallel.threads = std::max(2u, threads);
    const PackingOrbit again = enumerate_orbit(spec, parallel);
    bool same = again.records.size() == full.records.size();
    for (std::size_t i = 0; same && i < full.records.size(); ++i) {
        same = canonical_key(again.records[i].circle, opts.dedup_quantum) ==
                   canonical_key(full.records[i].circle, opts.dedup_quantum) &&
               again.records[i].word_length == full.records[i].word_length;
    }
    out.push_back({"enumeration-deterministic", same,
                   "1 and " + std::to_string(parallel.threads) + " workers give identical records"});
    return out;
}

} // namespace

VerifyReport verify_experiment(const ExperimentConfig& config, unsigned threads) {
    VerifyReport report;
    const GroupSpec spec = build_group(config.group);
    report.items.push_back(check_curvature_identities(spec));
    report.items.push_back(check_action_oracle(spec));
    report.items.push_back(check_homomorphism(spec));
    switch (spec.family) {
    case Family::schottky: schottky_family_checks(spec, report.items); break;
    case Family::apollonian: apollonian_family_checks(spec, report.items); break;
    case Family::modular: modular_family_checks(spec, report.items); break;
    case Family::generic: break;
    }
    for (auto& item : enumeration_checks(spec, config.enumeration, threads)) report.items.push_back(std::move(item));
    return report;
}

} // namespace census
