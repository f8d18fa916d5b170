#include "qtk/checkers/checkers.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <charconv>
#include <cmath>
#include <numbers>

#include "qtk/qir/variants.hpp"

namespace qtk {

namespace {

std::string num(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, r.ptr);
}

std::string bits_str(const std::vector<int>& bits) {
    std::string s;
    for (int b : bits) s += static_cast<char>('0' + b);
    return s;
}

bool all_zero(const std::vector<int>& bits) {
    return std::all_of(bits.begin(), bits.end(), [](int b) { return b == 0; });
}

CheckVerdict fail(CheckVerdict v, std::string witness) {
    v.passed = false;
    v.witness = std::move(witness);
    return v;
}

double chi2_pvalue(double stat, int df) {
    if (df < 1) return 1.0;
    if (!(stat > 0)) return 1.0;
    boost::math::chi_squared dist(df);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

// Pools bins (by ascending expectation) until each pooled bin expects >= 5.
std::vector<std::pair<double, double>> pool(std::vector<std::pair<double, double>> bins) {
    std::sort(bins.begin(), bins.end());
    std::vector<std::pair<double, double>> out;
    std::pair<double, double> acc{0, 0};
    for (const auto& b : bins) {
        if (b.first >= 5 && acc.first == 0) {
            out.push_back(b);
            continue;
        }
        acc.first += b.first;
        acc.second += b.second;
        if (acc.first >= 5) {
            out.push_back(acc);
            acc = {0, 0};
        }
    }
    if (acc.first > 0) {
        if (out.empty()) {
            out.push_back(acc);
        } else {
            auto it = std::min_element(out.begin(), out.end());
            it->first += acc.first;
            it->second += acc.second;
        }
    }
    return out;
}

Argument shift_arg(const Argument& a, const std::function<int(int)>& f) {
    if (auto q = std::get_if<std::vector<int>>(&a)) {
        std::vector<int> out;
        for (int x : *q) out.push_back(f(x));
        return out;
    }
    return a;
}

std::optional<std::string> run_trial(const PreparedInput& in, int n_qubits, const std::vector<int>& io_in,
                                     const std::vector<int>& io_out, const std::vector<Step>& steps,
                                     const std::vector<int>& extra_zero, Rng& rng) {
    StateVector s(n_qubits);
    in.prepare(s, io_in);
    try {
        for (const auto& st : steps) st(s, rng);
    } catch (const Fault& f) {
        return "input=" + in.description() + " fault=" + std::string(fault_kind_name(f.kind())) + " at " + f.site();
    }
    in.unprepare(s, io_out);
    std::vector<int> measured = io_out;
    measured.insert(measured.end(), extra_zero.begin(), extra_zero.end());
    auto bits = s.measure(measured, rng);
    if (!all_zero(bits)) return "input=" + in.description() + " observed=" + bits_str(bits);
    return std::nullopt;
}

std::string target_name(const Invocation& inv) { return inv.sub ? inv.sub->name : std::string("?"); }

}  // namespace

void to_json(nlohmann::json& j, const CheckVerdict& v) {
    j = nlohmann::json{{"check", v.check},
                       {"target", v.target},
                       {"passed", v.passed},
                       {"shots", v.shots},
                       {"statistic", v.statistic},
                       {"threshold", v.threshold},
                       {"witness", v.witness ? nlohmann::json(*v.witness) : nlohmann::json(nullptr)}};
}

void StatConfig::validate() const {
    if (shots < 1) throw std::invalid_argument("shots must be at least 1");
    if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

// ---------------------------------------------------------------- invocation

std::map<std::string, Value> Invocation::run(StateVector& state, Rng& rng) const {
    if (!lib || !sub) throw std::invalid_argument("invocation without a subroutine");
    return run_in_place(*lib, *sub, args, state, rng);
}

Invocation Invocation::with_sub(SubPtr other) const {
    Invocation out = *this;
    out.sub = std::move(other);
    return out;
}

Invocation Invocation::shifted(int offset) const {
    Invocation out = *this;
    for (auto& a : out.args) a = shift_arg(a, [&](int q) { return q + offset; });
    for (auto& q : out.io_in) q += offset;
    for (auto& q : out.io_out) q += offset;
    out.n_qubits += offset;
    return out;
}

Invocation Invocation::remapped(const std::vector<int>& map, int n_total) const {
    Invocation out = *this;
    auto f = [&](int q) { return map.at(static_cast<std::size_t>(q)); };
    for (auto& a : out.args) a = shift_arg(a, f);
    for (auto& q : out.io_in) q = f(q);
    for (auto& q : out.io_out) q = f(q);
    out.n_qubits = n_total;
    return out;
}

Invocation bind_auto(const Library& lib, SubPtr sub, const std::map<std::string, Value>& classical,
                     const std::map<std::string, Handle>& handles, const std::map<std::string, int>& widths) {
    Invocation inv;
    inv.lib = &lib;
    inv.sub = sub;
    for (const auto& p : sub->params)
        if ((p.kind == ParamKind::Int || p.kind == ParamKind::Float || p.kind == ParamKind::Bool) && !classical.count(p.name))
            throw std::invalid_argument("no value for parameter '" + p.name + "'");
    auto lengths = param_lengths(*sub, classical);
    int next = 0;
    for (const auto& p : sub->params) {
        switch (p.kind) {
            case ParamKind::Int:
            case ParamKind::Float:
            case ParamKind::Bool: {
                auto it = classical.find(p.name);
                if (it == classical.end()) throw std::invalid_argument("no value for parameter '" + p.name + "'");
                inv.args.emplace_back(it->second);
                break;
            }
            case ParamKind::Handle: {
                auto it = handles.find(p.name);
                if (it == handles.end()) throw std::invalid_argument("no subroutine for parameter '" + p.name + "'");
                inv.args.emplace_back(it->second);
                break;
            }
            case ParamKind::Qubits: {
                std::int64_t len;
                if (auto it = lengths.find(p.name); it != lengths.end())
                    len = it->second;
                else if (auto w = widths.find(p.name); w != widths.end())
                    len = w->second;
                else
                    throw std::invalid_argument("no width for register '" + p.name + "'");
                std::vector<int> q = iota_qubits(next, static_cast<int>(len));
                next += static_cast<int>(len);
                inv.io_in.insert(inv.io_in.end(), q.begin(), q.end());
                inv.args.emplace_back(std::move(q));
                break;
            }
        }
    }
    inv.io_out = inv.io_in;
    inv.n_qubits = next;
    return inv;
}

// ---------------------------------------------------------------- transform checks

CheckVerdict transform_check(const StateVector& state, const std::function<void(StateVector&)>& inverse_expected,
                             Rng& rng, int shots, std::vector<int> qubits) {
    CheckVerdict v{"transform", {}, true, shots, 0.0, 0.0, {}};
    if (qubits.empty()) qubits = iota_qubits(0, state.n_qubits());
    StateVector s = state;
    if (inverse_expected) inverse_expected(s);
    auto dist = s.distribution(qubits);
    int nonzero = 0;
    std::optional<std::uint64_t> first;
    for (int i = 0; i < shots; ++i) {
        double u = rng.uniform(), acc = 0;
        std::uint64_t outcome = dist.rbegin()->first;
        for (const auto& [k, p] : dist) {
            acc += p;
            if (u < acc) {
                outcome = k;
                break;
            }
        }
        if (outcome != 0) {
            ++nonzero;
            if (!first) first = outcome;
        }
    }
    v.statistic = static_cast<double>(nonzero) / shots;
    if (nonzero) {
        std::vector<int> bits;
        for (std::size_t i = 0; i < qubits.size(); ++i)
            bits.push_back(static_cast<int>((*first >> (qubits.size() - 1 - i)) & 1));
        return fail(v, "observed=" + bits_str(bits));
    }
    return v;
}

void qft_output_unprepare(std::uint64_t j, StateVector& state, const std::vector<int>& qubits) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        const int k = static_cast<int>(i) + 1;
        const std::uint64_t mod = std::uint64_t{1} << k;
        const double theta = 2 * std::numbers::pi * static_cast<double>(j % mod) / static_cast<double>(mod);
        std::vector<int> t{qubits[i]};
        if (theta != 0.0) state.apply(Gate(GateKind::R1, -theta), t);
        state.apply(Gate(GateKind::H), t);
    }
}

CheckVerdict qft_output_check(std::uint64_t j, int n, const StateVector& state, Rng& rng, int shots,
                              std::vector<int> qubits) {
    if (qubits.empty()) qubits = iota_qubits(0, state.n_qubits());
    if (static_cast<int>(qubits.size()) != n) throw std::invalid_argument("qft check expects " + std::to_string(n) + " qubits");
    auto v = transform_check(state, [&](StateVector& s) { qft_output_unprepare(j, s, qubits); }, rng, shots, qubits);
    v.check = "qft_output";
    v.target = "j=" + std::to_string(j);
    return v;
}

// ---------------------------------------------------------------- statistics

CheckVerdict stat_fit(const std::map<std::uint64_t, int>& observed, const std::map<std::uint64_t, double>& expected,
                      const StatConfig& cfg) {
    cfg.validate();
    CheckVerdict v{"distribution", {}, true, 0, 1.0, cfg.alpha, {}};
    double psum = 0;
    for (const auto& [k, p] : expected) {
        if (p < 0) throw std::invalid_argument("negative expected probability");
        psum += p;
    }
    if (std::abs(psum - 1.0) > 1e-9) throw std::invalid_argument("expected distribution sums to " + num(psum));
    long total = 0;
    for (const auto& [k, c] : observed) total += c;
    if (total < 1) throw std::invalid_argument("no observations");
    v.shots = static_cast<int>(total);
    for (const auto& [k, c] : observed) {
        auto it = expected.find(k);
        if (c > 0 && (it == expected.end() || it->second <= 0)) {
            v.statistic = 0.0;
            return fail(v, "outcome " + std::to_string(k) + " observed " + std::to_string(c) + " times but is impossible");
        }
    }
    std::vector<std::tuple<std::uint64_t, double, double>> cats;  // outcome, expected count, observed
    for (const auto& [k, p] : expected) {
        if (p <= 0) continue;
        auto it = observed.find(k);
        cats.emplace_back(k, p * static_cast<double>(total), it == observed.end() ? 0.0 : it->second);
    }
    auto worst = [&]() {
        std::uint64_t k = 0;
        double dev = -1, o = 0, e = 0;
        for (const auto& [kk, ee, oo] : cats) {
            double d = std::abs(oo - ee) / std::sqrt(ee);
            if (d > dev) {
                dev = d;
                k = kk;
                o = oo;
                e = ee;
            }
        }
        return "p=" + num(v.statistic) + " outcome " + std::to_string(k) + " observed " + num(o) + " expected " + num(e);
    };
    if (cats.size() <= 1) return v;
    const bool exact = cats.size() == 2 && cfg.method != StatConfig::Method::ChiSquare;
    if (exact) {
        const double p = std::get<1>(cats[0]) / static_cast<double>(total);
        const auto x = static_cast<long>(std::get<2>(cats[0]));
        boost::math::binomial dist(static_cast<double>(total), p);
        const double px = boost::math::pdf(dist, static_cast<double>(x));
        // walk the pmf outward from the mode by the ratio recurrence
        const long mode = std::min(total, static_cast<long>(std::floor((total + 1) * p)));
        const double pm = boost::math::pdf(dist, static_cast<double>(mode));
        const double cut = px * (1 + 1e-7);
        const double odds = p / (1 - p);
        double pv = pm <= cut ? pm : 0;
        double cur = pm;
        for (long i = mode; i < total && cur > 0; ++i) {
            cur *= static_cast<double>(total - i) / static_cast<double>(i + 1) * odds;
            if (cur <= cut) pv += cur;
        }
        cur = pm;
        for (long i = mode; i > 0 && cur > 0; --i) {
            cur *= static_cast<double>(i) / static_cast<double>(total - i + 1) / odds;
            if (cur <= cut) pv += cur;
        }
        v.statistic = std::min(1.0, pv);
    } else {
        std::vector<std::pair<double, double>> bins;
        for (const auto& [k, e, o] : cats) bins.emplace_back(e, o);
        auto pooled = pool(bins);
        double chi = 0;
        for (const auto& [e, o] : pooled) chi += (o - e) * (o - e) / e;
        v.statistic = chi2_pvalue(chi, static_cast<int>(pooled.size()) - 1);
    }
    if (v.statistic < cfg.alpha) return fail(v, worst());
    return v;
}

CheckVerdict two_sample_fit(const std::map<std::string, int>& a, const std::map<std::string, int>& b, double alpha) {
    CheckVerdict v{"two_sample", {}, true, 0, 1.0, alpha, {}};
    double na = 0, nb = 0;
    std::map<std::string, std::pair<double, double>> cats;
    for (const auto& [k, c] : a) {
        cats[k].first += c;
        na += c;
    }
    for (const auto& [k, c] : b) {
        cats[k].second += c;
        nb += c;
    }
    v.shots = static_cast<int>(na + nb);
    if (na == 0 || nb == 0) throw std::invalid_argument("two-sample test needs observations on both sides");
    const double n = na + nb;
    // pool categories whose smaller expected cell is below 5
    std::vector<std::pair<double, std::pair<double, double>>> bins;
    for (const auto& [k, c] : cats) {
        double tot = c.first + c.second;
        bins.push_back({tot * std::min(na, nb) / n, c});
    }
    std::sort(bins.begin(), bins.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::pair<double, double>> pooled;
    std::pair<double, double> acc{0, 0};
    double acc_e = 0;
    for (const auto& [e, c] : bins) {
        if (e >= 5 && acc_e == 0) {
            pooled.push_back(c);
            continue;
        }
        acc.first += c.first;
        acc.second += c.second;
        acc_e += e;
        if (acc_e >= 5) {
            pooled.push_back(acc);
            acc = {0, 0};
            acc_e = 0;
        }
    }
    if (acc_e > 0) {
        if (pooled.empty()) {
            pooled.push_back(acc);
        } else {
            pooled.front().first += acc.first;
            pooled.front().second += acc.second;
        }
    }
    double chi = 0;
    for (const auto& [ca, cb] : pooled) {
        double tot = ca + cb;
        double ea = tot * na / n, eb = tot * nb / n;
        if (ea > 0) chi += (ca - ea) * (ca - ea) / ea;
        if (eb > 0) chi += (cb - eb) * (cb - eb) / eb;
    }
    v.statistic = chi2_pvalue(chi, static_cast<int>(pooled.size()) - 1);
    if (v.statistic < alpha) {
        std::string most;
        double dev = -1;
        for (const auto& [k, c] : cats) {
            double d = std::abs(c.first / na - c.second / nb);
            if (d > dev) {
                dev = d;
                most = k + " (" + num(c.first / na) + " vs " + num(c.second / nb) + ")";
            }
        }
        return fail(v, "p=" + num(v.statistic) + " largest difference at " + most);
    }
    return v;
}

// ---------------------------------------------------------------- relation checks

Step step_of(const Invocation& inv) {
    return [inv](StateVector& s, Rng& rng) { inv.run(s, rng); };
}

CheckVerdict identity_check(const std::vector<Step>& steps, int n_qubits, const std::vector<int>& io_in,
                            const std::vector<int>& io_out, int trials, const std::vector<InputKind>& kinds, Rng& rng,
                            const std::string& target) {
    CheckVerdict v{"identity", target, true, 0, 0.0, 0.0, {}};
    if (kinds.empty()) throw std::invalid_argument("identity check needs at least one input kind");
    if (io_in.size() != io_out.size()) throw std::invalid_argument("identity check needs matching input and output widths");
    const int width = static_cast<int>(io_in.size());
    for (int t = 0; t < trials; ++t) {
        ++v.shots;
        if (width == 0) {
            StateVector s(n_qubits);
            try {
                for (const auto& st : steps) st(s, rng);
            } catch (const Fault& f) {
                return fail(v, "fault=" + std::string(fault_kind_name(f.kind())) + " at " + f.site());
            }
            continue;
        }
        auto in = sample_input(kinds[static_cast<std::size_t>(t) % kinds.size()], width, rng);
        if (auto w = run_trial(in, n_qubits, io_in, io_out, steps, {}, rng)) {
            v.statistic = 1;
            return fail(v, *w);
        }
    }
    return v;
}

CheckVerdict identity_check(const Invocation& inv, int trials, const std::vector<InputKind>& kinds, Rng& rng) {
    return identity_check({step_of(inv)}, inv.n_qubits, inv.io_in, inv.io_out, trials, kinds, rng, target_name(inv));
}

CheckVerdict equivalence_check(const Invocation& p1, const Invocation& p2, int trials, Rng& rng,
                               const std::vector<InputKind>& kinds, const StatConfig& cfg) {
    if (p1.sub->params.size() != p2.sub->params.size())
        throw std::invalid_argument("equivalence check needs matching signatures");
    for (std::size_t i = 0; i < p1.sub->params.size(); ++i)
        if (p1.sub->params[i].kind != p2.sub->params[i].kind)
            throw std::invalid_argument("equivalence check needs matching signatures");
    const std::string target = target_name(p1) + " ~ " + target_name(p2);
    if (is_adjointable(*p2.sub, *p2.lib)) {
        auto inv = p2.with_sub(std::make_shared<const Subroutine>(inverse_of(*p2.sub, *p2.lib)));
        auto v = identity_check({step_of(p1), step_of(inv)}, std::max(p1.n_qubits, p2.n_qubits), p1.io_in, p2.io_in,
                                trials, kinds, rng, target);
        v.check = "equivalence";
        return v;
    }
    cfg.validate();
    CheckVerdict v{"equivalence", target, true, 0, 1.0, cfg.alpha / std::max(1, trials), {}};
    const int width = static_cast<int>(p1.io_in.size());
    for (int t = 0; t < trials; ++t) {
        std::optional<PreparedInput> in;
        if (width > 0) in = sample_input(kinds[static_cast<std::size_t>(t) % kinds.size()], width, rng);
        auto sample = [&](const Invocation& p) {
            std::map<std::string, int> counts;
            for (int s = 0; s < cfg.shots; ++s) {
                StateVector st(p.n_qubits);
                if (in) in->prepare(st, p.io_in);
                std::string key;
                try {
                    auto outs = p.run(st, rng);
                    key = bits_str(st.measure(p.io_out, rng));
                    for (const auto& [name, val] : outs) key += "|" + name + "=" + value_str(val);
                } catch (const Fault& f) {
                    key = "fault:" + std::string(fault_kind_name(f.kind()));
                }
                ++counts[key];
            }
            return counts;
        };
        auto r = two_sample_fit(sample(p1), sample(p2), v.threshold);
        v.shots += r.shots;
        v.statistic = std::min(v.statistic, r.statistic);
        if (!r.passed) return fail(v, (in ? "input=" + in->description() + " " : std::string()) + *r.witness);
    }
    return v;
}

CheckVerdict variant_checks(const Invocation& p, const VariantSet& variants, int trials, Rng& rng,
                            const std::vector<InputKind>& kinds) {
    const Library& lib = *p.lib;
    if (!is_adjointable(*p.sub, lib)) throw VariantError("'" + p.sub->name + "' is not adjointable");
    CheckVerdict v{"variants", target_name(p), true, 0, 0.0, 0.0, {}};
    SubPtr auto_inv = std::make_shared<const Subroutine>(inverse_of(*p.sub, lib));
    Invocation inv = p.with_sub(variants.inverse ? variants.inverse : auto_inv);
    Invocation auto_inverse = p.with_sub(auto_inv);

    auto merge = [&](const CheckVerdict& r, const std::string& label) {
        v.shots += r.shots;
        if (!r.passed && v.passed) {
            v.passed = false;
            v.witness = label + ": " + r.witness.value_or("");
        }
    };

    // P after InvP
    merge(identity_check({step_of(inv), step_of(p)}, p.n_qubits, p.io_in, p.io_out, trials, kinds, rng), "inverse");

    for (int k : {-2, -1, 2, 3}) {
        Invocation pow;
        if (variants.power) {
            pow = p.with_sub(variants.power);
            pow.args.insert(pow.args.begin(), Argument{Value{std::int64_t{k}}});
        } else {
            pow = p.with_sub(std::make_shared<const Subroutine>(power_of(*p.sub, k, lib)));
        }
        std::vector<Step> steps{step_of(pow)};
        // undo with the generated inverse so a faulty hand-written inverse is not masked
        for (int i = 0; i < std::abs(k); ++i) steps.push_back(step_of(k > 0 ? auto_inverse : p));
        merge(identity_check(steps, p.n_qubits, p.io_in, p.io_out, trials, kinds, rng), "power k=" + std::to_string(k));
    }

    {
        SubPtr ctl = variants.controlled ? variants.controlled : std::make_shared<const Subroutine>(controlled_of(*p.sub, lib));
        Invocation body = p.shifted(2);
        Invocation cinv = body.with_sub(ctl);
        cinv.args.insert(cinv.args.begin(), Argument{std::vector<int>{0, 1}});
        Invocation undo = auto_inverse.shifted(2);
        CheckVerdict c{"controlled", v.target, true, 0, 0.0, 0.0, {}};
        const int width = static_cast<int>(body.io_in.size());
        for (int t = 0; t < trials && c.passed; ++t) {
            const std::uint64_t pattern = t % 2 == 0 ? 3 : rng.below(3);
            auto flip = [pattern](StateVector& s, Rng&) {
                for (int q = 0; q < 2; ++q)
                    if ((pattern >> (1 - q)) & 1) {
                        std::vector<int> tq{q};
                        s.apply(Gate(GateKind::X), tq);
                    }
            };
            std::vector<Step> steps{flip, step_of(cinv)};
            if (pattern == 3) steps.push_back(step_of(undo));
            steps.push_back(flip);
            ++c.shots;
            if (width == 0) continue;
            auto in = sample_input(kinds[static_cast<std::size_t>(t) % kinds.size()], width, rng);
            if (auto w = run_trial(in, body.n_qubits, body.io_in, body.io_out, steps, {0, 1}, rng))
                c = fail(c, "controls=" + std::to_string(pattern >> 1) + std::to_string(pattern & 1) + " " + *w);
        }
        merge(c, "controlled");
    }
    return v;
}

CheckVerdict unitarity_check(const Invocation& p, int trials, int shots_per_purity, Rng& rng, bool static_scan) {
    CheckVerdict v{"unitarity", target_name(p), true, 0, 1.0, 1.0, {}};
    if (static_scan) {
        if (auto site = find_measurement(*p.sub, *p.lib)) {
            v.statistic = 0;
            return fail(v, "measurement at " + *site);
        }
    }
    const int n = p.n_qubits;
    if (n > 7) throw std::invalid_argument("unitarity check supports at most 7 qubits, got " + std::to_string(n));
    if (shots_per_purity < 1) throw std::invalid_argument("shots must be at least 1");
    Invocation a = p.shifted(1);
    Invocation b = p.remapped([&] {
        std::vector<int> m;
        for (int i = 0; i < n; ++i) m.push_back(1 + n + i);
        return m;
    }(), 2 * n + 1);
    a.n_qubits = 2 * n + 1;
    const int width = static_cast<int>(p.io_in.size());
    for (int t = 0; t < trials; ++t) {
        std::optional<PreparedInput> in;
        if (width > 0) in = sample_input(t % 2 == 0 ? InputKind::CSI : InputKind::RTI, width, rng);
        int zeros = 0;
        for (int s = 0; s < shots_per_purity; ++s) {
            StateVector st(2 * n + 1);
            if (in) {
                in->prepare(st, a.io_in);
                in->prepare(st, b.io_in);
            }
            try {
                a.run(st, rng);
                b.run(st, rng);
            } catch (const Fault& f) {
                return fail(v, "fault=" + std::string(fault_kind_name(f.kind())) + " at " + f.site());
            }
            std::vector<int> anc{0};
            st.apply(Gate(GateKind::H), anc);
            std::vector<int> ctl{0}, pol{1};
            for (std::size_t i = 0; i < a.io_out.size(); ++i) {
                std::vector<int> tg{a.io_out[i], b.io_out[i]};
                st.apply_controlled(Gate(GateKind::SWAP), ctl, pol, tg);
            }
            st.apply(Gate(GateKind::H), anc);
            zeros += st.measure(anc, rng)[0] == 0;
        }
        v.shots += shots_per_purity;
        const double p0 = static_cast<double>(zeros) / shots_per_purity;
        const double purity = 2 * p0 - 1;
        const double sigma = 2 * std::sqrt(p0 * (1 - p0) / shots_per_purity);
        const double threshold = 1 - 3 * sigma;
        if (purity < v.statistic) {
            v.statistic = purity;
            v.threshold = threshold;
        }
        if (purity < threshold)
            return fail(v, (in ? "input=" + in->description() + " " : std::string()) + "purity=" + num(purity) +
                               " below " + num(threshold));
    }
    return v;
}

}  // namespace qtk
