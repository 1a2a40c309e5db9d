#include "aelts/confidence.hpp"

#include "aelts/error.hpp"
#include "aelts/whittle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace aelts {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_method_config(const RegionOptions& options, int k) {
    if (options.method == Method::EB && k != 1) {
        throw ConfigError("estimated Bartlett correction requires a one-parameter model");
    }
    if (options.method == Method::TB && !options.tb_constant) {
        throw ConfigError("method tb requires a supplied Bartlett constant");
    }
    if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
}

}  // namespace

std::string_view to_string(Method method) {
    switch (method) {
        case Method::EL: return "el";
        case Method::AEL: return "ael";
        case Method::EB: return "eb";
        case Method::TB: return "tb";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "el") return Method::EL;
    if (lower == "ael") return Method::AEL;
    if (lower == "eb") return Method::EB;
    if (lower == "tb") return Method::TB;
    throw InputError("unknown method '" + std::string(text) + "' (expected el, ael, eb or tb)");
}

std::string_view to_string(NodeStatus status) {
    switch (status) {
        case NodeStatus::Ok: return "ok";
        case NodeStatus::NoSolution: return "nosolution";
        case NodeStatus::Failed: return "failed";
    }
    return "?";
}

std::string_view to_string(EndKind kind) {
    switch (kind) {
        case EndKind::Crossing: return "crossing";
        case EndKind::Truncated: return "truncated";
        case EndKind::Undefined: return "undefined";
    }
    return "?";
}

MethodEvaluation evaluate_method(const Periodogram& pg, ArmaOrder order,
                                 const Eigen::VectorXd& beta1, const RegionOptions& options) {
    const int k = order.profile_dim();
    check_method_config(options, k);
    const double nominal = chi_square_quantile(k, options.alpha);

    MethodEvaluation out;
    out.stat = kNaN;
    out.threshold = nominal;
    const PsiMatrix psi = psi_profile(pg, order, beta1);
    const auto n = static_cast<std::size_t>(psi.size());
    try {
        if (options.method == Method::TB) {
            out.threshold = nominal * BartlettFactor::supplied(*options.tb_constant, n).scale();
        } else if (options.method == Method::EB) {
            out.threshold = corrected_threshold(estimate_bartlett(psi), k, options.alpha);
        }
        const PsiMatrix target = options.method == Method::AEL ? adjust(psi, options.policy) : psi;
        out.stat = solve_dual(target, options.dual).stat;
        out.status = NodeStatus::Ok;
    } catch (const NoSolutionError& e) {
        out.status = NodeStatus::NoSolution;
        out.message = e.what();
    } catch (const ConvergenceError& e) {
        out.status = NodeStatus::Failed;
        out.message = e.what();
    } catch (const InputError& e) {
        out.status = NodeStatus::Failed;
        out.message = e.what();
    }
    return out;
}

double Axis::at(int i) const {
    if (steps <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

Eigen::VectorXd RegionGrid::node(std::size_t index) const {
    Eigen::VectorXd x(static_cast<Eigen::Index>(axes.size()));
    for (std::size_t a = 0; a < axes.size(); ++a) {
        const auto steps = static_cast<std::size_t>(axes[a].steps);
        x[static_cast<Eigen::Index>(a)] = axes[a].at(static_cast<int>(index % steps));
        index /= steps;
    }
    return x;
}

bool RegionGrid::inside(std::size_t index) const {
    return status[index] == NodeStatus::Ok && stat[index] <= threshold[index];
}

double RegionGrid::calibrated(std::size_t index) const {
    if (status[index] != NodeStatus::Ok) return kNaN;
    return stat[index] * nominal_threshold / threshold[index];
}

RegionGrid scan_region(const Periodogram& pg, ArmaOrder order, const std::vector<Axis>& box,
                       const RegionOptions& options) {
    const int k = order.profile_dim();
    if (static_cast<int>(box.size()) != k) {
        throw ConfigError("region box needs one axis per ARMA coefficient");
    }
    check_method_config(options, k);
    std::size_t total = 1;
    for (const auto& axis : box) {
        if (axis.steps < 2 || !(axis.lo < axis.hi)) {
            throw ConfigError("each axis needs lo < hi and at least two steps");
        }
        total *= static_cast<std::size_t>(axis.steps);
    }

    RegionGrid grid;
    grid.axes = box;
    grid.method = options.method;
    grid.alpha = options.alpha;
    grid.order = order;
    grid.nominal_threshold = chi_square_quantile(k, options.alpha);
    grid.stat.assign(total, kNaN);
    grid.threshold.assign(total, grid.nominal_threshold);
    grid.status.assign(total, NodeStatus::Failed);

    for (std::size_t i = 0; i < total; ++i) {
        if (region_violation(order, grid.node(i), true) > 0.0) {
            std::ostringstream msg;
            msg << "region box leaves the stationarity/invertibility region at node "
                << grid.node(i).transpose();
            throw DomainError(msg.str());
        }
    }
    for (std::size_t i = 0; i < total; ++i) {
        const MethodEvaluation eval = evaluate_method(pg, order, grid.node(i), options);
        grid.stat[i] = eval.stat;
        grid.threshold[i] = eval.threshold;
        grid.status[i] = eval.status;
    }
    return grid;
}

Interval interval_1d(const Periodogram& pg, ArmaOrder order, const RegionOptions& options,
                     const IntervalSearch& search, std::optional<double> estimate) {
    if (order.profile_dim() != 1) throw ConfigError("interval_1d needs a one-parameter model");
    check_method_config(options, 1);
    if (!(search.lower_bound < search.upper_bound)) throw ConfigError("empty search bounds");

    Interval out;
    out.threshold = chi_square_quantile(1, options.alpha);
    out.estimate = estimate ? *estimate : whittle_fit(pg, order).estimate[0];

    auto probe = [&](double beta) {
        Eigen::VectorXd b(1);
        b << beta;
        return evaluate_method(pg, order, b, options);
    };

    out.lo = out.hi = out.estimate;
    if (!probe(out.estimate).covered()) {
        out.contains_estimate = false;
        return out;
    }
    out.contains_estimate = true;

    // Returns the last inside point in direction `dir` and how the region ends.
    auto walk = [&](double dir, double bound) -> std::pair<double, EndKind> {
        double inside = out.estimate;
        double step = search.initial_step;
        while (true) {
            double next = inside + dir * step;
            const bool at_bound = dir > 0 ? next >= bound : next <= bound;
            if (at_bound) next = bound;
            const MethodEvaluation eval = probe(next);
            if (eval.covered()) {
                if (at_bound) return {bound, EndKind::Truncated};
                inside = next;
                step *= 1.5;
                continue;
            }
            double outside = next;
            EndKind kind = eval.status == NodeStatus::Ok ? EndKind::Crossing : EndKind::Undefined;
            while (std::abs(outside - inside) > search.tolerance) {
                const double mid = 0.5 * (inside + outside);
                const MethodEvaluation m = probe(mid);
                if (m.covered()) {
                    inside = mid;
                } else {
                    outside = mid;
                    kind = m.status == NodeStatus::Ok ? EndKind::Crossing : EndKind::Undefined;
                }
            }
            return {inside, kind};
        }
    };

    std::tie(out.lo, out.lo_kind) = walk(-1.0, search.lower_bound);
    std::tie(out.hi, out.hi_kind) = walk(+1.0, search.upper_bound);
    return out;
}

std::vector<Polyline> extract_contour(const RegionGrid& grid) {
    if (grid.axes.size() != 2) throw ConfigError("contours need a two-axis grid");
    const int nx = grid.axes[0].steps;
    const int ny = grid.axes[1].steps;
    const int px = nx + 2;
    const int py = ny + 2;

    // Padded field: negative or zero inside, positive outside, NaN undefined.
    auto value = [&](int i, int j) -> double {
        if (i == 0 || j == 0 || i == px - 1 || j == py - 1) return 1.0;
        const auto idx = static_cast<std::size_t>((i - 1) + nx * (j - 1));
        return grid.calibrated(idx) - grid.nominal_threshold;
    };
    auto coord = [&](int i, int j) {
        return Eigen::Vector2d(grid.axes[0].at(std::clamp(i - 1, 0, nx - 1)),
                               grid.axes[1].at(std::clamp(j - 1, 0, ny - 1)));
    };
    auto is_inside = [](double v) { return v <= 0.0; };

    // Edge keys: horizontal edge (i,j)-(i+1,j) and vertical edge (i,j)-(i,j+1).
    auto h_key = [&](int i, int j) { return static_cast<std::int64_t>(2 * (j * px + i)); };
    auto v_key = [&](int i, int j) { return static_cast<std::int64_t>(2 * (j * px + i) + 1); };

    std::unordered_map<std::int64_t, Eigen::Vector2d> points;
    auto crossing = [&](std::int64_t key, int i0, int j0, int i1, int j1) {
        if (points.count(key) == 0) {
            const double v0 = value(i0, j0);
            const double v1 = value(i1, j1);
            const double t = v0 / (v0 - v1);
            points.emplace(key, coord(i0, j0) + t * (coord(i1, j1) - coord(i0, j0)));
        }
        return key;
    };

    std::vector<std::pair<std::int64_t, std::int64_t>> segments;
    for (int j = 0; j < py - 1; ++j) {
        for (int i = 0; i < px - 1; ++i) {
            const double v[4] = {value(i, j), value(i + 1, j), value(i + 1, j + 1), value(i, j + 1)};
            if (std::isnan(v[0]) || std::isnan(v[1]) || std::isnan(v[2]) || std::isnan(v[3])) continue;
            const bool in[4] = {is_inside(v[0]), is_inside(v[1]), is_inside(v[2]), is_inside(v[3])};
            // Edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3).
            std::int64_t edge[4] = {-1, -1, -1, -1};
            if (in[0] != in[1]) edge[0] = crossing(h_key(i, j), i, j, i + 1, j);
            if (in[1] != in[2]) edge[1] = crossing(v_key(i + 1, j), i + 1, j, i + 1, j + 1);
            if (in[3] != in[2]) edge[2] = crossing(h_key(i, j + 1), i, j + 1, i + 1, j + 1);
            if (in[0] != in[3]) edge[3] = crossing(v_key(i, j), i, j, i, j + 1);

            const int crossings = (edge[0] >= 0) + (edge[1] >= 0) + (edge[2] >= 0) + (edge[3] >= 0);
            if (crossings == 2) {
                std::int64_t ends[2];
                int found = 0;
                for (auto e : edge) {
                    if (e >= 0) ends[found++] = e;
                }
                segments.emplace_back(ends[0], ends[1]);
            } else if (crossings == 4) {
                // Saddle: cut off the corners whose side differs from the centre.
                const bool centre_in = is_inside(0.25 * (v[0] + v[1] + v[2] + v[3]));
                static constexpr int corner_edges[4][2] = {{0, 3}, {0, 1}, {1, 2}, {2, 3}};
                for (int c = 0; c < 4; ++c) {
                    if (in[c] != centre_in) {
                        segments.emplace_back(edge[corner_edges[c][0]], edge[corner_edges[c][1]]);
                    }
                }
            }
        }
    }

    std::unordered_map<std::int64_t, std::vector<std::size_t>> incident;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        incident[segments[s].first].push_back(s);
        incident[segments[s].second].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);

    auto trace = [&](std::size_t first_seg, std::int64_t start_key) {
        Polyline line;
        std::int64_t key = start_key;
        std::size_t seg = first_seg;
        line.points.push_back(points.at(key));
        while (true) {
            used[seg] = true;
            key = segments[seg].first == key ? segments[seg].second : segments[seg].first;
            if (key == start_key) {
                line.closed = true;
                break;
            }
            const Eigen::Vector2d& p = points.at(key);
            if (!(p == line.points.back())) line.points.push_back(p);
            const auto& next = incident.at(key);
            auto it = std::find_if(next.begin(), next.end(), [&](std::size_t s) { return !used[s]; });
            if (it == next.end()) break;
            seg = *it;
        }
        if (line.closed && line.points.size() > 1 && line.points.back() == line.points.front()) {
            line.points.pop_back();
        }
        return line;
    };

    std::vector<Polyline> lines;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s]) continue;
        for (auto key : {segments[s].first, segments[s].second}) {
            if (incident.at(key).size() == 1 && !used[s]) lines.push_back(trace(s, key));
        }
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!used[s]) lines.push_back(trace(s, segments[s].first));
    }
    return lines;
}

double polygon_area(const Polyline& poly) {
    const auto& p = poly.points;
    double twice = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& a = p[i];
        const auto& b = p[(i + 1) % p.size()];
        twice += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * std::abs(twice);
}

bool polygon_contains(const Polyline& poly, const Eigen::Vector2d& point) {
    const auto& p = poly.points;
    int winding = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& a = p[i];
        const auto& b = p[(i + 1) % p.size()];
        const double cross = (b.x() - a.x()) * (point.y() - a.y()) - (point.x() - a.x()) * (b.y() - a.y());
        if (a.y() <= point.y()) {
            if (b.y() > point.y() && cross > 0.0) ++winding;
        } else if (b.y() <= point.y() && cross < 0.0) {
            --winding;
        }
    }
    return winding != 0;
}

}  // namespace aelts
