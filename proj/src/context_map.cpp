#include "havsim/context_map.hpp"

#include <cmath>
#include <stdexcept>

namespace havsim {

ActionGrid::ActionGrid(double v_min, double v_max, int n_v, double phi_max, int n_phi) {
    if (n_v < 2) throw std::invalid_argument("ActionGrid: n_v must be >= 2");
    if (n_phi < 3 || n_phi % 2 == 0)
        throw std::invalid_argument("ActionGrid: n_phi must be odd and >= 3 (zero steer required)");
    if (!(v_min < v_max) || !(phi_max > 0.0))
        throw std::invalid_argument("ActionGrid: bad speed or steering range");

    speeds_.resize(static_cast<std::size_t>(n_v));
    for (int i = 0; i < n_v; ++i)
        speeds_[i] = v_min + (v_max - v_min) * static_cast<double>(i) / (n_v - 1);
    speeds_.front() = v_min;
    speeds_.back() = v_max;

    steers_.resize(static_cast<std::size_t>(n_phi));
    for (int i = 0; i < n_phi; ++i)
        steers_[i] = -phi_max + 2.0 * phi_max * static_cast<double>(i) / (n_phi - 1);
    zero_steer_column_ = (n_phi - 1) / 2;
    steers_[zero_steer_column_] = 0.0;  // exact zero, not a rounding residue
    steers_.front() = -phi_max;
    steers_.back() = phi_max;
}

namespace {

// Catmull-Rom segment value; p1 and p2 are the bracketing nodes.
inline double catmull_rom(double p0, double p1, double p2, double p3, double t) {
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t * t * t);
}

// Interpolate a uniformly spaced 1D array at fractional index u. End
// intervals use reflected ghost nodes, clamping the boundary tangents to the
// one-sided secant so linear data is reproduced exactly.
double interp_1d(const double* data, int n, double u, bool cubic) {
    if (u <= 0.0) return data[0];
    if (u >= n - 1) return data[n - 1];
    const int i = static_cast<int>(u);
    const double t = u - i;
    if (t == 0.0) return data[i];
    if (!cubic) return data[i] * (1.0 - t) + data[i + 1] * t;
    const double p0 = (i > 0) ? data[i - 1] : 2.0 * data[0] - data[1];
    const double p3 = (i + 2 <= n - 1) ? data[i + 2] : 2.0 * data[n - 1] - data[n - 2];
    return catmull_rom(p0, data[i], data[i + 1], p3, t);
}

}  // namespace

std::vector<double> upsample(const std::vector<double>& values, int rows, int cols,
                             int target_rows, int target_cols) {
    if (rows < 2 || cols < 2) throw std::invalid_argument("upsample: source must be >= 2x2");
    if (target_rows < rows || target_cols < cols)
        throw std::invalid_argument("upsample: target must be >= source per axis");
    if (values.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("upsample: value count does not match shape");

    const bool cubic = rows >= 4 && cols >= 4;

    // Pass 1: widen every source row to target_cols.
    std::vector<double> wide(static_cast<std::size_t>(rows) * target_cols);
    const double col_scale = static_cast<double>(cols - 1) / (target_cols - 1);
    for (int r = 0; r < rows; ++r) {
        const double* src = values.data() + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < target_cols; ++c)
            wide[static_cast<std::size_t>(r) * target_cols + c] =
                interp_1d(src, cols, c * col_scale, cubic);
    }

    // Pass 2: stretch every column to target_rows.
    std::vector<double> out(static_cast<std::size_t>(target_rows) * target_cols);
    const double row_scale = static_cast<double>(rows - 1) / (target_rows - 1);
    std::vector<double> column(static_cast<std::size_t>(rows));
    for (int c = 0; c < target_cols; ++c) {
        for (int r = 0; r < rows; ++r)
            column[r] = wide[static_cast<std::size_t>(r) * target_cols + c];
        for (int r = 0; r < target_rows; ++r)
            out[static_cast<std::size_t>(r) * target_cols + c] =
                interp_1d(column.data(), rows, r * row_scale, cubic);
    }
    return out;
}

Action merge_and_select(const std::vector<const ContextMap*>& interest_maps,
                        const std::vector<double>& weights,
                        const std::vector<const ContextMap*>& danger_maps, const ActionGrid& grid,
                        const MergeParams& params, MergeDiagnostics* diag) {
    const int n_v = grid.n_v();
    const int n_phi = grid.n_phi();
    const std::size_t cells = static_cast<std::size_t>(n_v) * n_phi;

    if (interest_maps.size() != weights.size())
        throw std::invalid_argument("merge_and_select: one weight per interest map required");
    for (const ContextMap* m : interest_maps)
        if (m->n_v != n_v || m->n_phi != n_phi)
            throw std::invalid_argument("merge_and_select: interest map shape mismatch");
    for (const ContextMap* m : danger_maps)
        if (m->n_v != n_v || m->n_phi != n_phi)
            throw std::invalid_argument("merge_and_select: danger map shape mismatch");

    std::vector<char> blocked(cells, 0);
    std::size_t n_blocked = 0;
    for (const ContextMap* m : danger_maps)
        for (std::size_t i = 0; i < cells; ++i)
            if (!blocked[i] && m->values[i] > params.danger_threshold) {
                blocked[i] = 1;
                ++n_blocked;
            }

    bool forward_open = false;
    for (int iv = 0; iv < n_v && !forward_open; ++iv) {
        if (grid.speeds()[iv] <= 0.0) continue;
        for (int ip = 0; ip < n_phi; ++ip)
            if (!blocked[static_cast<std::size_t>(iv) * n_phi + ip]) {
                forward_open = true;
                break;
            }
    }

    if (diag) {
        diag->blocked_fraction = static_cast<double>(n_blocked) / static_cast<double>(cells);
        diag->all_blocked = n_blocked == cells;
        diag->all_forward_blocked = !forward_open;
    }

    if (n_blocked == cells) return {0.0, 0.0};  // all options dangerous: stand still

    std::vector<double> filtered(cells, 0.0);
    for (std::size_t k = 0; k < interest_maps.size(); ++k) {
        const auto& vals = interest_maps[k]->values;
        const double w = weights[k];
        for (std::size_t i = 0; i < cells; ++i) filtered[i] += w * vals[i];
    }
    for (std::size_t i = 0; i < cells; ++i)
        if (blocked[i]) filtered[i] = 0.0;

    const auto fine =
        upsample(filtered, n_v, n_phi, params.interp_n_v, params.interp_n_phi);

    int best_p = 0, best_q = 0;
    double best_value = -1.0;
    const int mid_q = (params.interp_n_phi - 1);  // used for |phi| comparison via index distance
    for (int p = 0; p < params.interp_n_v; ++p) {
        for (int q = 0; q < params.interp_n_phi; ++q) {
            const double v = fine[static_cast<std::size_t>(p) * params.interp_n_phi + q];
            bool take = false;
            if (v > best_value) {
                take = true;
            } else if (v == best_value) {
                if (p > best_p) {
                    take = true;  // prefer higher speed
                } else if (p == best_p &&
                           std::abs(2 * q - mid_q) < std::abs(2 * best_q - mid_q)) {
                    take = true;  // then smaller |phi|
                }
            }
            if (take) {
                best_value = v;
                best_p = p;
                best_q = q;
            }
        }
    }

    Action a;
    a.speed = grid.v_min() +
              (grid.v_max() - grid.v_min()) * static_cast<double>(best_p) / (params.interp_n_v - 1);
    a.steer = -grid.phi_max() +
              2.0 * grid.phi_max() * static_cast<double>(best_q) / (params.interp_n_phi - 1);
    return a;
}

}  // namespace havsim
