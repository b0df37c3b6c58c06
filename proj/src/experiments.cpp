#include "ddf/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ddf/diversity.hpp"

namespace ddf {

namespace {

// Sentinel written into the required-SNR column of infeasible rows.
constexpr double kInfeasibleSnrDb = 9999.0;

std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), format, v);
    return buf;
}

std::string header_comments(const ExperimentSpec& spec) {
    std::ostringstream out;
    out << "# " << kToolVersion << "\n";
    for (const auto& [key, value] : spec.echo()) {
        out << "# " << key << " = " << value << "\n";
    }
    return out.str();
}

std::optional<int> forced_first_tx(std::optional<int> decode_subframe, const FrameConfig& frame) {
    if (!decode_subframe) return std::nullopt;
    const int tx = first_tx_from_decode(*decode_subframe);
    if (tx > frame.n_max()) return std::nullopt;  // decoded too late to transmit
    return tx;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_config(const ConfigFile& cfg) {
    const std::string sec = "experiment";
    if (!cfg.has_section(sec)) throw std::invalid_argument("config: missing [experiment] section");
    ExperimentSpec spec;
    spec.preset = cfg.get_or(sec, "preset", "outage_contour");

    const std::string scheme_name = cfg.get_or(sec, "scheme", "monostream");
    const auto kind = parse_scheme_kind(scheme_name);
    if (!kind) throw std::invalid_argument("config: unknown scheme: " + scheme_name);
    spec.scheme.kind = *kind;
    spec.scheme.relay_order_bits = static_cast<int>(cfg.get_int(sec, "m_r", 4));
    spec.scheme.gaussian_alphabet = cfg.get_bool(sec, "gaussian_alphabet", false);
    if (const auto p = cfg.get(sec, "p")) {
        if (*p == "auto_mu") {
            spec.scheme.kind = SchemeKind::patched_monostream_mu;
        } else if (*p != "full") {
            spec.scheme.patched_slots = std::stoll(*p);
        }
    }

    spec.frame_preset = cfg.get_or(sec, "frame", spec.frame_preset);
    spec.info_bits = cfg.get_int(sec, "k", spec.info_bits);
    spec.t1 = cfg.get_int(sec, "t1", spec.t1);
    spec.snr_sr_db = cfg.get_double(sec, "snr_sr_db", spec.snr_sr_db);
    spec.n_rx = static_cast<int>(cfg.get_int(sec, "n_rx", spec.n_rx));

    if (const auto m_list = cfg.get(sec, "m_list")) {
        std::istringstream in(*m_list);
        std::string item;
        spec.decode_subframes.clear();
        while (std::getline(in, item, ',')) {
            if (item == "marginal") {
                spec.marginal = true;
            } else if (!item.empty()) {
                spec.decode_subframes.push_back(std::stoi(item));
            }
        }
    }

    if (const auto grid = cfg.get(sec, "snr_sd_grid_db")) spec.snr_sd_grid_db = parse_grid(*grid);
    spec.target = cfg.get_double(sec, "target_outage", spec.target);
    spec.target = cfg.get_double(sec, "target_se", spec.target);
    if (const auto rates = cfg.get(sec, "rates")) spec.rates = parse_grid(*rates);

    spec.search_lo_db = cfg.get_double(sec, "search_lo_db", spec.search_lo_db);
    spec.search_hi_db = cfg.get_double(sec, "search_hi_db", spec.search_hi_db);
    spec.tol_db = cfg.get_double(sec, "tol_db", spec.tol_db);
    spec.trials = cfg.get_int(sec, "trials", spec.trials);
    spec.seed = static_cast<std::uint64_t>(cfg.get_int(sec, "seed", 1));
    spec.out_path = cfg.get_or(sec, "out", "");
    spec.mi_table_order = static_cast<int>(cfg.get_int(sec, "order", 2));
    return spec;
}

FrameConfig ExperimentSpec::frame() const {
    if (frame_preset == "open_loop_7sf") return FrameConfig::open_loop_7sf(info_bits);
    if (frame_preset == "closed_loop_3sf") {
        // The fixed-frame view of the closed-loop preset uses the lowest rate.
        return FrameConfig::closed_loop_3sf(rates.front(), t1);
    }
    throw std::invalid_argument("unknown frame preset: " + frame_preset);
}

FrameConfig ExperimentSpec::frame_for_rate(double rate) const {
    return FrameConfig::closed_loop_3sf(rate, t1);
}

std::vector<std::pair<std::string, std::string>> ExperimentSpec::echo() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("preset", preset);
    kv.emplace_back("scheme", scheme.name());
    if (scheme.patched_slots) kv.emplace_back("p", std::to_string(*scheme.patched_slots));
    kv.emplace_back("frame", frame_preset);
    kv.emplace_back("k", std::to_string(info_bits));
    if (frame_preset == "closed_loop_3sf") kv.emplace_back("t1", std::to_string(t1));
    kv.emplace_back("snr_sr_db", std::isinf(snr_sr_db) ? "off" : fmt("%.4f", snr_sr_db));
    kv.emplace_back("n_rx", std::to_string(n_rx));
    if (!decode_subframes.empty() || marginal) {
        std::string m_list;
        for (int m : decode_subframes) m_list += std::to_string(m) + ",";
        if (marginal) m_list += "marginal,";
        m_list.pop_back();
        kv.emplace_back("m_list", m_list);
    }
    kv.emplace_back("target", fmt("%.6g", target));
    kv.emplace_back("trials", std::to_string(trials));
    kv.emplace_back("seed", std::to_string(seed));
    kv.emplace_back("tol_db", fmt("%.3f", tol_db));
    kv.emplace_back("search_db", fmt("%.1f", search_lo_db) + ":" + fmt("%.1f", search_hi_db));
    return kv;
}

MiTableSet tables_for_spec(const ExperimentSpec& spec) {
    std::vector<int> orders;
    if (spec.preset == "se_contour") {
        for (double rate : spec.rates) {
            for (int order : spec.scheme.required_orders(spec.frame_for_rate(rate))) {
                orders.push_back(order);
            }
        }
        // The always-on reference needs the source order even in Gaussian mode.
        orders.push_back(2);
    } else {
        orders = spec.scheme.required_orders(spec.frame());
        if (orders.empty()) orders.push_back(2);
    }
    return MiTableSet::with_orders(orders);
}

std::string run_outage_contour(const ExperimentSpec& spec, const MiTableSet& tables,
                               const ProgressFn& progress) {
    const FrameConfig frame = spec.frame();
    const MiView mi = MiView::for_scheme(spec.scheme, tables);

    std::vector<std::pair<std::optional<int>, std::string>> conditionings;
    for (int m : spec.decode_subframes) {
        conditionings.emplace_back(m, std::to_string(m));
    }
    if (spec.marginal || conditionings.empty()) {
        conditionings.emplace_back(std::nullopt, "marginal");
    }

    std::ostringstream out;
    out << header_comments(spec);
    out << "snr_sd_db,snr_rd_db_required,M,scheme,stderr_at_solution,feasible\n";
    for (const auto& [decode_m, label] : conditionings) {
        SnrSearchSpec search;
        search.axis = SearchAxis::relay_snr;
        search.snr_sr_db = spec.snr_sr_db;
        search.n_rx = spec.n_rx;
        search.target = TargetMetric::outage(spec.target);
        search.lo_db = spec.search_lo_db;
        search.hi_db = spec.search_hi_db;
        search.tol_db = spec.tol_db;
        search.trials = spec.trials;
        search.seed = spec.seed;
        search.threads = spec.threads;
        if (decode_m) {
            search.policy = ActivationPolicy::fixed(forced_first_tx(decode_m, frame));
        }
        for (double snr_sd : spec.snr_sd_grid_db) {
            search.fixed_snr_db = snr_sd;
            const SnrSearchResult res = find_snr_for_target(spec.scheme, frame, search, mi);
            out << fmt("%.4f", snr_sd) << ","
                << fmt("%.4f", res.feasible ? res.snr_db : kInfeasibleSnrDb) << "," << label
                << "," << spec.scheme.name() << "," << fmt("%.6g", res.at_solution.stderr_)
                << "," << (res.feasible ? 1 : 0) << "\n";
            if (progress) {
                progress("outage-contour M=" + label + " snr_sd=" + fmt("%.1f", snr_sd) +
                         (res.feasible ? " -> " + fmt("%.2f", res.snr_db) + " dB"
                                       : " -> infeasible"));
            }
        }
    }
    return out.str();
}

std::string run_se_contour(const ExperimentSpec& spec, const MiTableSet& tables,
                           const ProgressFn& progress) {
    std::ostringstream out;
    out << header_comments(spec);
    out << "snr_sd_db,snr_rd_db_required,target_se,scheme,chosen_rate,stderr_at_solution,"
           "feasible\n";

    for (double snr_sd : spec.snr_sd_grid_db) {
        double chosen_rate = 0.0;
        // Metric at a candidate relay SNR: slow link adaptation over the
        // coding-rate family, all with common random numbers.
        auto evaluate = [&](double snr_rd_db) {
            LinkBudget budget;
            budget.snr_sd_db = snr_sd;
            budget.snr_rd_db = snr_rd_db;
            budget.snr_sr_db = spec.snr_sr_db;
            budget.n_rx = spec.n_rx;
            const RateChoice choice = slow_link_adaptation(
                spec.scheme, [&](double r) { return spec.frame_for_rate(r); }, spec.rates,
                budget, spec.trials, spec.seed, tables, spec.threads);
            chosen_rate = choice.rate;
            return choice.spectral_efficiency;
        };
        const SnrSearchResult res = find_snr_for_target_metric(
            evaluate, TargetMetric::se(spec.target), spec.search_lo_db, spec.search_hi_db,
            spec.tol_db);
        out << fmt("%.4f", snr_sd) << ","
            << fmt("%.4f", res.feasible ? res.snr_db : kInfeasibleSnrDb) << ","
            << fmt("%.3f", spec.target) << "," << spec.scheme.name() << ","
            << fmt("%.2f", res.feasible ? chosen_rate : 0.0) << ","
            << fmt("%.6g", res.at_solution.stderr_) << "," << (res.feasible ? 1 : 0) << "\n";
        if (progress) {
            progress("se-contour snr_sd=" + fmt("%.1f", snr_sd) +
                     (res.feasible ? " -> " + fmt("%.2f", res.snr_db) + " dB" : " -> infeasible"));
        }
    }
    return out.str();
}

std::string run_diversity_report(const ExperimentSpec& spec) {
    const FrameConfig frame = spec.frame();
    nlohmann::ordered_json report;
    report["tool"] = kToolVersion;
    for (const auto& [key, value] : spec.echo()) report["config"][key] = value;

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int decode_m = 1; decode_m <= frame.n_max(); ++decode_m) {
        // decode_m == n_max means the relay never transmits; report it as the
        // no-relay row alongside the explicit activations.
        const std::optional<int> m =
            decode_m < frame.n_max() ? std::optional<int>(decode_m) : std::nullopt;
        const MatryoshkaChannel ch = scheme_snr_channel(spec.scheme, frame, m);
        const double rc = static_cast<double>(frame.info_bits) /
                          static_cast<double>(ch.total_bits());
        nlohmann::ordered_json row;
        row["scheme"] = spec.scheme.name();
        row["decode_subframe"] = m ? nlohmann::ordered_json(*m) : nlohmann::ordered_json(nullptr);
        row["diversity_orders"] = ch.diversity_orders;
        row["block_bits"] = ch.block_bits;
        row["delta_macro"] = matryoshka_bound(ch, rc);
        row["full_macro"] = full_macro(spec.scheme, frame, m);
        row["full_micro"] = full_micro(spec.scheme, frame, m, spec.n_rx);
        row["boundary_case"] =
            m && scheme_blocks(spec.scheme, frame, m).top_bits == frame.info_bits;
        if (m && spec.scheme.kind != SchemeKind::direct &&
            spec.scheme.kind != SchemeKind::monostream &&
            spec.scheme.kind != SchemeKind::dist_alamouti) {
            const int tx = first_tx_from_decode(*m);
            const long long l2 =
                (frame.total_symbols() - frame.symbols_through(tx - 1)) * frame.source_order_bits;
            const auto min_mr = min_mr_for_full_diversity(
                spec.scheme.kind == SchemeKind::monostream_adapted_mod ||
                        spec.scheme.kind == SchemeKind::alamouti_adapted_mod
                    ? SchemeKind::patched_alamouti  // same K m_S / L_2 threshold
                    : spec.scheme.kind,
                frame.info_bits, l2, frame.source_order_bits);
            row["min_m_r"] = min_mr ? nlohmann::ordered_json(*min_mr)
                                    : nlohmann::ordered_json("infeasible");
        }
        rows.push_back(row);
    }
    report["rows"] = rows;
    return report.dump(2) + "\n";
}

std::string run_mi_table_dump(const ExperimentSpec& spec) {
    const MiTable table = build_mi_table(qam_for_order(spec.mi_table_order), spec.mi_grid);
    std::ostringstream out;
    out << "# " << kToolVersion << "\n";
    out << "# constellation = " << (1 << spec.mi_table_order) << "-QAM\n";
    table.write_csv(out);
    return out.str();
}

}  // namespace ddf
