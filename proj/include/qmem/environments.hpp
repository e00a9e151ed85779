#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmem/policy.hpp"

namespace qmem {

// ---------------------------------------------------------------------------
// Invasion game family. One cycle per episode: the attacker shows a percept,
// the defender answers with one move.

enum class InvasionVariant { two_symbol, four_percept_4act, four_percept_2act, neverending_color };
enum class BasisMode { single_onb, random_onb_per_cycle };

struct InvasionConfig {
  InvasionVariant variant = InvasionVariant::two_symbol;
  double reward_correct = 1.0;
  double reward_wrong = -1.0;
  double p_coh = 1.0;
  std::optional<long> reversal_cycle;            // meanings swap from this cycle on
  std::optional<long> color_introduction_cycle;  // colour 0 only before this cycle
  BasisMode basis_mode = BasisMode::single_onb;
  std::optional<CMatrix> u_target;               // four-percept variants

  void validate() const;
  int memory_dim() const;
  int action_count() const;
};

struct InvasionPercept {
  int symbol = 0;
  int color = 0;  // 0 for the two-symbol and never-ending variants
  DensityMatrix state;
  std::shared_ptr<const PovmSet> povm;
};

/// Discrete percept id: 2*symbol + colour for four-percept variants, else the symbol.
int invasion_percept_index(const InvasionConfig& cfg, int symbol, int color);

/// The rewarded action for a percept at a given cycle, honouring reversal.
std::size_t invasion_correct_action(const InvasionConfig& cfg, long cycle, int percept_index);

double invasion_step(const InvasionConfig& cfg, long cycle, std::size_t agent_action,
                     int percept_index);

/// Stateful percept source; caches the fixed-basis POVM.
class InvasionGame {
 public:
  explicit InvasionGame(InvasionConfig cfg);

  const InvasionConfig& config() const { return cfg_; }
  InvasionPercept percept(long cycle, RngStream& rng) const;
  /// Percept for explicit labels and basis rotation U_R (identity for a
  /// single basis). Colour state rho_c is used only by the never-ending variant.
  InvasionPercept make_percept(int symbol, int color, const CMatrix* u_rotation,
                               const DensityMatrix* rho_c) const;
  double reward(long cycle, std::size_t action, const InvasionPercept& p) const;
  /// Expected reward of a distribution over actions.
  double expected_reward(long cycle, const std::vector<double>& dist,
                         const InvasionPercept& p) const;

 private:
  InvasionConfig cfg_;
  std::shared_ptr<const PovmSet> fixed_povm_;
};

InvasionPercept invasion_percept(const InvasionConfig& cfg, long cycle, RngStream& rng);

// ---------------------------------------------------------------------------
// 3x3 grid world with one obstacle. Rows count from the top.

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Action order: right, down, left, up.
enum GridAction : int { kRight = 0, kDown = 1, kLeft = 2, kUp = 3 };
inline constexpr int kGridActions = 4;
const char* grid_action_name(int action);

struct GridWorld {
  int width = 3;
  int height = 3;
  Cell obstacle{2, 1};
  Cell start{2, 0};
  Cell goal{2, 2};
  std::optional<double> boundary_penalty;
  double goal_reward = 1.0;
  bool random_start = false;

  void validate() const;
  bool is_free(Cell c) const;
  /// Free cells in row-major order.
  std::vector<Cell> free_cells() const;
  int free_count() const;
  int index_of(Cell c) const;
  Cell cell_at(int index) const;
};

struct GridStep {
  Cell next;
  double reward = 0;
  bool terminal = false;
  bool hit_boundary = false;
};

Cell grid_reset(const GridWorld& gw, RngStream& rng);
GridStep grid_step(const GridWorld& gw, Cell cell, int action);

/// |cell> (x) |phi> on the 8 x 4 composite memory.
DensityMatrix grid_percept_state(const GridWorld& gw, Cell cell);
PovmSet grid_povm(const GridWorld& gw);

/// Breadth-first shortest path length under grid_step dynamics.
int grid_shortest_path(const GridWorld& gw, Cell from);
/// Expected steps to the goal under the uniform policy, for every free
/// non-goal cell (absorbing-chain linear system).
std::vector<double> grid_hitting_times(const GridWorld& gw);
/// Optimal (shortest-path) actions per free cell.
std::vector<std::vector<int>> grid_optimal_actions(const GridWorld& gw);

/// free_count x 4 table of per-cell action distributions, rows in free-cell order.
Eigen::MatrixXd grid_policy_table(const std::function<std::vector<double>(Cell)>& policy,
                                  const GridWorld& gw);

}  // namespace qmem
