#pragma once

#include <vector>

#include "havsim/hav_model.hpp"

namespace havsim {

/// Discrete action grid: n_v speeds spanning [vmin, vmax] and n_phi steering
/// angles spanning [-phimax, +phimax], endpoints included. n_phi must be odd
/// so that the zero-steering column exists exactly.
class ActionGrid {
public:
    ActionGrid(double v_min, double v_max, int n_v, double phi_max, int n_phi);

    const std::vector<double>& speeds() const { return speeds_; }
    const std::vector<double>& steers() const { return steers_; }
    int n_v() const { return static_cast<int>(speeds_.size()); }
    int n_phi() const { return static_cast<int>(steers_.size()); }
    int zero_steer_column() const { return zero_steer_column_; }

    double v_min() const { return speeds_.front(); }
    double v_max() const { return speeds_.back(); }
    double phi_max() const { return steers_.back(); }

private:
    std::vector<double> speeds_;
    std::vector<double> steers_;
    int zero_steer_column_;
};

enum class MapKind { Interest, Danger };

/// Value grid over the action grid, row index = speed, column index = steer.
struct ContextMap {
    MapKind kind{MapKind::Interest};
    int n_v{0};
    int n_phi{0};
    std::vector<double> values;

    ContextMap() = default;
    ContextMap(MapKind k, const ActionGrid& grid)
        : kind(k), n_v(grid.n_v()), n_phi(grid.n_phi()),
          values(static_cast<std::size_t>(n_v) * n_phi, 0.0) {}

    double& at(int iv, int iphi) { return values[static_cast<std::size_t>(iv) * n_phi + iphi]; }
    double at(int iv, int iphi) const {
        return values[static_cast<std::size_t>(iv) * n_phi + iphi];
    }
};

// Interpolation resolutions are chosen odd/aligned so the fine grid contains
// the exact zero-steer action and every default source node; an even phi
// count could never return phi = 0 outside the stand-still fallback.
struct MergeParams {
    double danger_threshold{0.1};
    int interp_n_v{21};
    int interp_n_phi{41};
};

struct MergeDiagnostics {
    double blocked_fraction{0.0};
    bool all_blocked{false};
    bool all_forward_blocked{false};  // every action with v > 0 is blocked
};

/// Separable upsampling of `values` (rows x cols) to a finer grid. Uses
/// Catmull-Rom cubic segments with clamped ends when both source axes have at
/// least 4 support points, bilinear otherwise. Exact wherever a source node
/// lands on a target node.
std::vector<double> upsample(const std::vector<double>& values, int rows, int cols,
                             int target_rows, int target_cols);

/// Danger masking, weighted interest merge, upsampled argmax. Returns the
/// stand-still action when every source action is blocked. Ties in the argmax
/// prefer higher speed, then smaller |phi|.
Action merge_and_select(const std::vector<const ContextMap*>& interest_maps,
                        const std::vector<double>& weights,
                        const std::vector<const ContextMap*>& danger_maps, const ActionGrid& grid,
                        const MergeParams& params, MergeDiagnostics* diag = nullptr);

}  // namespace havsim
