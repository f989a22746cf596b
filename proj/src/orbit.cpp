#include "census/orbit.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <numbers>

#include "parallel.hpp"

namespace census {

std::size_t CanonicalKeyHash::operator()(const CanonicalKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::int64_t cell : key.cells) {
        std::uint64_t x = static_cast<std::uint64_t>(cell) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        h ^= x ^ (x >> 31);
    }
    return static_cast<std::size_t>(h);
}

CanonicalKey canonical_key(const InversiveCircle& circle, double quantum) {
    CanonicalKey key;
    const auto coeffs = circle.coefficients();
    if (!(quantum > 0)) throw Error(ErrorCode::InvalidOptions, "dedup quantum must be > 0");
    for (std::size_t i = 0; i < 4; ++i) key.cells[i] = std::llround(coeffs[i] / quantum);
    return key;
}

KeyStore::KeyStore(double quantum, double match_tol) : quantum_(quantum), match_cells_(match_tol / quantum) {}

std::optional<std::uint32_t> KeyStore::find(const InversiveCircle& circle) const {
    const auto coeffs = circle.coefficients();
    std::array<std::array<std::int64_t, 3>, 4> options{};
    std::array<int, 4> counts{};
    for (std::size_t i = 0; i < 4; ++i) {
        const double x = coeffs[i] / quantum_;
        const std::int64_t cell = std::llround(x);
        const double frac = x - static_cast<double>(cell);
        options[i][counts[i]++] = cell;
        if (frac > 0.5 - match_cells_) options[i][counts[i]++] = cell + 1;
        if (frac < -0.5 + match_cells_) options[i][counts[i]++] = cell - 1;
    }
    CanonicalKey key;
    for (int i0 = 0; i0 < counts[0]; ++i0) {
        key.cells[0] = options[0][i0];
        for (int i1 = 0; i1 < counts[1]; ++i1) {
            key.cells[1] = options[1][i1];
            for (int i2 = 0; i2 < counts[2]; ++i2) {
                key.cells[2] = options[2][i2];
                for (int i3 = 0; i3 < counts[3]; ++i3) {
                    key.cells[3] = options[3][i3];
                    if (auto it = map_.find(key); it != map_.end()) return it->second;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<std::uint32_t> KeyStore::insert_if_absent(const InversiveCircle& circle, std::uint32_t value) {
    if (auto existing = find(circle)) return existing;
    map_.emplace(canonical_key(circle, quantum_), value);
    return std::nullopt;
}

void EnumOptions::validate() const {
    if (!(t_max > 0) || !std::isfinite(t_max)) throw Error(ErrorCode::InvalidOptions, "t_max must be a positive number");
    if (budget < 1) throw Error(ErrorCode::InvalidOptions, "budget must be at least 1");
    if (slack_depth < 0) throw Error(ErrorCode::InvalidOptions, "slack_depth must be non-negative");
    if (!(dedup_quantum > 0)) throw Error(ErrorCode::InvalidOptions, "dedup quantum must be positive");
    if (max_depth && *max_depth < 0) throw Error(ErrorCode::InvalidOptions, "max_depth must be non-negative");
}

std::uint64_t orbit_fingerprint(const GroupSpec& spec, double t_max) {
    std::uint64_t h = spec_fingerprint(spec);
    std::uint64_t bits;
    std::memcpy(&bits, &t_max, sizeof bits);
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

constexpr std::uint32_t kOutOfRange = std::numeric_limits<std::uint32_t>::max();

struct Letter {
    int code;
    MotionMap map;
    std::size_t inverse; // index of the inverse letter in the alphabet
};

std::vector<Letter> make_alphabet(const GroupSpec& spec) {
    std::vector<Letter> letters;
    for (std::size_t i = 0; i < spec.generators.size(); ++i) {
        const MotionMap& g = spec.generators[i];
        const MotionMap inv = g.inverse();
        const int code = static_cast<int>(i) + 1;
        const std::size_t at = letters.size();
        if (inv.same_as(g)) {
            letters.push_back({code, g, at});
        } else {
            letters.push_back({code, g, at + 1});
            letters.push_back({-code, inv, at});
        }
    }
    return letters;
}

std::size_t letter_index(const std::vector<Letter>& letters, int code) {
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (letters[i].code == code) return i;
    }
    throw Error(ErrorCode::InvalidOptions, "word uses unknown generator letter " + std::to_string(code));
}

// Disk that letter `code` maps the exterior of its source disk into.
const Disk& target_disk(const SchottkyData& data, int code) {
    const auto& pair = data.pairs.at(static_cast<std::size_t>(std::abs(code) - 1));
    return code > 0 ? pair.target : pair.source;
}

// Signed spherical curvature of the boundary of {form <= 0}: cot of the
// cap's angular radius.
double disk_curvature(const HermitianForm& form) {
    return (form.a + form.c) / (2.0 * std::sqrt(form.discriminant()));
}

PruningMode resolve_mode(const GroupSpec& spec, PruningMode requested) {
    const bool schottky = spec.family == Family::schottky && spec.schottky() != nullptr;
    if (requested == PruningMode::automatic) return schottky ? PruningMode::certified : PruningMode::slack;
    if (requested == PruningMode::certified && !schottky) {
        throw Error(ErrorCode::NotSchottky, "certified pruning needs a schottky group with disk data");
    }
    return requested;
}

struct Candidate {
    InversiveCircle circle;
    double curvature;
    int seed;
};

class Enumerator {
public:
    Enumerator(const GroupSpec& spec, const EnumOptions& opts)
        : spec_(spec), opts_(opts), mode_(resolve_mode(spec, opts.pruning)), letters_(make_alphabet(spec)),
          store_(opts.dedup_quantum), threads_(detail::resolve_threads(opts.threads)) {
        orbit_.t_max = opts.t_max;
        orbit_.fingerprint = orbit_fingerprint(spec, opts.t_max);
    }

    PackingOrbit run() {
        if (mode_ != PruningMode::slack && mode_ != PruningMode::none && mode_ != PruningMode::certified) {
            throw Error(ErrorCode::InvalidOptions, "unresolved pruning mode");
        }
        if (spec_.family == Family::schottky && spec_.schottky() != nullptr) {
            run_words();
        } else {
            run_circles();
        }
        orbit_.exhaustive = !orbit_.budget_exhausted && !orbit_.depth_limited;
        orbit_.certified = orbit_.exhaustive && mode_ == PruningMode::certified;
        if (orbit_.budget_exhausted) {
            orbit_.warnings.push_back("budget exhausted after " + std::to_string(orbit_.examined) +
                                      " circle examinations; the packing may not be locally finite, or the "
                                      "budget is too small");
        }
        return std::move(orbit_);
    }

private:
    bool in_range(double curvature) const { return curvature < opts_.t_max; }

    // How many of `wanted` expansions fit in the remaining budget at
    // `cost` examinations each.
    std::size_t affordable(std::size_t wanted, std::uint64_t cost) {
        const std::uint64_t left = opts_.budget - std::min(opts_.budget, orbit_.examined);
        const std::uint64_t fit = cost == 0 ? wanted : left / cost;
        if (fit < wanted) {
            orbit_.budget_exhausted = true;
            return static_cast<std::size_t>(fit);
        }
        return wanted;
    }

    void add_record(const Candidate& cand, std::vector<int> witness) {
        OrbitRecord rec{cand.circle, cand.curvature, static_cast<int>(witness.size()), std::move(witness), cand.seed};
        orbit_.records.push_back(std::move(rec));
    }

    // Seeds enter at word length zero. Returns per-seed in-range flags.
    std::vector<bool> insert_seeds() {
        const std::size_t n = affordable(spec_.seeds.size(), 1);
        std::vector<bool> fresh(n, false);
        for (std::size_t j = 0; j < n; ++j) {
            ++orbit_.examined;
            const InversiveCircle& s = spec_.seeds[j];
            const Candidate cand{s, spherical_curvature(s), static_cast<int>(j)};
            const bool keep = in_range(cand.curvature);
            const auto slot = keep ? static_cast<std::uint32_t>(orbit_.records.size()) : kOutOfRange;
            if (!store_.insert_if_absent(s, slot)) {
                fresh[j] = true;
                if (keep) add_record(cand, {});
            }
        }
        return fresh;
    }

    // Reduced words of a Schottky group; every node carries its group
    // element and produces the images of all seeds.
    struct WordNode {
        MotionMap element;
        std::size_t last = kNoLetter;
        std::vector<int> word;
        int miss = 0;
    };
    static constexpr std::size_t kNoLetter = std::numeric_limits<std::size_t>::max();

    struct WordExpansion {
        bool keep = false;
        WordNode child;
        std::vector<Candidate> candidates;
        std::uint64_t examined = 0;
    };

    void run_words() {
        const SchottkyData& data = *spec_.schottky();
        insert_seeds();
        if (orbit_.budget_exhausted) return;

        std::vector<WordNode> frontier(1);
        const std::uint64_t cost = spec_.seeds.size();
        for (int depth = 0; !frontier.empty(); ++depth) {
            std::vector<std::pair<std::size_t, std::size_t>> work;
            for (std::size_t p = 0; p < frontier.size(); ++p) {
                for (std::size_t li = 0; li < letters_.size(); ++li) {
                    if (frontier[p].last != kNoLetter && letters_[frontier[p].last].inverse == li) continue;
                    work.emplace_back(p, li);
                }
            }
            if (mode_ == PruningMode::certified) {
                // The certificate examines no circles, so it runs before budgeting.
                std::vector<char> pruned(work.size(), 0);
                detail::parallel_for(work.size(), threads_, [&](std::size_t begin, std::size_t end) {
                    for (std::size_t i = begin; i < end; ++i) {
                        const auto [p, li] = work[i];
                        const HermitianForm bound =
                            apply_map_form(frontier[p].element, target_disk(data, letters_[li].code).form());
                        pruned[i] = disk_curvature(bound) >= opts_.t_max;
                    }
                });
                std::size_t kept = 0;
                for (std::size_t i = 0; i < work.size(); ++i) {
                    if (!pruned[i]) work[kept++] = work[i];
                }
                work.resize(kept);
            }
            if (work.empty()) break;
            if (opts_.max_depth && depth >= *opts_.max_depth) {
                orbit_.depth_limited = true;
                break;
            }
            work.resize(affordable(work.size(), cost));

            std::vector<WordExpansion> results(work.size());
            detail::parallel_for(work.size(), threads_, [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) {
                    const auto [p, li] = work[i];
                    const WordNode& parent = frontier[p];
                    const Letter& letter = letters_[li];
                    WordExpansion& out = results[i];
                    out.child.element = compose(parent.element, letter.map);
                    out.child.last = li;
                    bool any_in_range = false;
                    for (std::size_t j = 0; j < spec_.seeds.size(); ++j) {
                        const InversiveCircle image = apply_map_circle(out.child.element, spec_.seeds[j]);
                        const double curv = spherical_curvature(image);
                        ++out.examined;
                        if (!in_range(curv)) continue;
                        any_in_range = true;
                        if (!store_.find(image)) out.candidates.push_back({image, curv, static_cast<int>(j)});
                    }
                    out.child.miss = any_in_range ? 0 : parent.miss + 1;
                    out.keep = mode_ != PruningMode::slack || out.child.miss <= opts_.slack_depth;
                }
            });

            std::vector<WordNode> next;
            for (std::size_t i = 0; i < work.size(); ++i) {
                WordExpansion& res = results[i];
                orbit_.examined += res.examined;
                const WordNode& parent = frontier[work[i].first];
                res.child.word = parent.word;
                res.child.word.push_back(letters_[work[i].second].code);
                for (const Candidate& cand : res.candidates) {
                    const auto slot = static_cast<std::uint32_t>(orbit_.records.size());
                    if (!store_.insert_if_absent(cand.circle, slot)) add_record(cand, res.child.word);
                }
                if (res.keep) next.push_back(std::move(res.child));
            }
            if (orbit_.budget_exhausted) return;
            frontier = std::move(next);
        }
    }

    // Breadth-first search over circles for groups with relations; the
    // store deduplicates every visited circle, in range or not.
    struct CircleNode {
        InversiveCircle circle;
        std::vector<int> word;
        std::size_t last = kNoLetter;
        int seed = 0;
        int miss = 0;
    };

    void run_circles() {
        std::vector<CircleNode> frontier;
        const std::vector<bool> fresh = insert_seeds();
        for (std::size_t j = 0; j < fresh.size(); ++j) {
            if (!fresh[j]) continue;
            const InversiveCircle& s = spec_.seeds[j];
            const int miss = in_range(spherical_curvature(s)) ? 0 : 1;
            if (mode_ == PruningMode::slack && miss > opts_.slack_depth) continue;
            frontier.push_back({s, {}, kNoLetter, static_cast<int>(j), miss});
        }
        if (orbit_.budget_exhausted) return;

        for (int depth = 0; !frontier.empty(); ++depth) {
            std::vector<std::pair<std::size_t, std::size_t>> work;
            for (std::size_t p = 0; p < frontier.size(); ++p) {
                for (std::size_t li = 0; li < letters_.size(); ++li) {
                    // Undoing the last letter returns to the parent circle.
                    if (frontier[p].last != kNoLetter && letters_[frontier[p].last].inverse == li) continue;
                    work.emplace_back(p, li);
                }
            }
            if (work.empty()) break;
            if (opts_.max_depth && depth >= *opts_.max_depth) {
                orbit_.depth_limited = true;
                break;
            }
            work.resize(affordable(work.size(), 1));

            std::vector<std::optional<Candidate>> results(work.size());
            detail::parallel_for(work.size(), threads_, [&](std::size_t begin, std::size_t end) {
                for (std::size_t i = begin; i < end; ++i) {
                    const auto [p, li] = work[i];
                    const InversiveCircle image = apply_map_circle(letters_[li].map, frontier[p].circle);
                    if (store_.find(image)) continue;
                    results[i] = Candidate{image, spherical_curvature(image), frontier[p].seed};
                }
            });
            orbit_.examined += work.size();

            std::vector<CircleNode> next;
            for (std::size_t i = 0; i < work.size(); ++i) {
                if (!results[i]) continue;
                const Candidate& cand = *results[i];
                const CircleNode& parent = frontier[work[i].first];
                const bool keep = in_range(cand.curvature);
                const auto slot = keep ? static_cast<std::uint32_t>(orbit_.records.size()) : kOutOfRange;
                if (store_.insert_if_absent(cand.circle, slot)) continue;
                std::vector<int> word;
                word.reserve(parent.word.size() + 1);
                word.push_back(letters_[work[i].second].code);
                word.insert(word.end(), parent.word.begin(), parent.word.end());
                const int miss = keep ? 0 : parent.miss + 1;
                if (keep) add_record(cand, word);
                if (mode_ == PruningMode::slack && miss > opts_.slack_depth) continue;
                next.push_back({cand.circle, std::move(word), work[i].second, cand.seed, miss});
            }
            if (orbit_.budget_exhausted) return;
            frontier = std::move(next);
        }
    }

    const GroupSpec& spec_;
    const EnumOptions& opts_;
    PruningMode mode_;
    std::vector<Letter> letters_;
    KeyStore store_;
    unsigned threads_;
    PackingOrbit orbit_;
};

} // namespace

Region bounding_cap(const std::vector<int>& prefix, const GroupSpec& spec) {
    const SchottkyData* data = spec.schottky();
    if (spec.family != Family::schottky || data == nullptr) {
        throw Error(ErrorCode::NotSchottky, "bounding caps exist only for schottky groups");
    }
    if (prefix.empty()) return Region::full();
    const auto letters = make_alphabet(spec);
    MotionMap element;
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        const std::size_t li = letter_index(letters, prefix[i]);
        if (prev != std::numeric_limits<std::size_t>::max() && letters[prev].inverse == li) {
            throw Error(ErrorCode::InvalidOptions, "bounding_cap: word is not reduced");
        }
        prev = li;
        if (i + 1 < prefix.size()) element = compose(element, letters[li].map);
    }
    const Cap cap = disk_cap(apply_map_form(element, target_disk(*data, prefix.back()).form()));
    return Region::cap(cap.center, cap.radius);
}

PackingOrbit enumerate_orbit(const GroupSpec& spec, const EnumOptions& options) {
    options.validate();
    if (spec.generators.empty() || spec.seeds.empty()) {
        throw Error(ErrorCode::InvalidOptions, "group spec needs generators and seeds");
    }
    return Enumerator(spec, options).run();
}

PackingOrbit map_orbit(const PackingOrbit& orbit, const MotionMap& g) {
    PackingOrbit out = orbit;
    for (auto& rec : out.records) {
        rec.circle = apply_map_circle(g, rec.circle);
        rec.curvature = spherical_curvature(rec.circle);
        rec.witness.clear();
    }
    const Mat2& m = g.matrix();
    for (double v : {m.a.real(), m.a.imag(), m.b.real(), m.b.imag()}) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        out.fingerprint = (out.fingerprint ^ bits) * 0x100000001b3ull;
    }
    return out;
}

} // namespace census
