#include "qmem/environments.hpp"

#include <deque>

namespace qmem {

// ---------------------------------------------------------------------------
// Invasion game

namespace {

bool four_percept(InvasionVariant v) {
  return v == InvasionVariant::four_percept_4act || v == InvasionVariant::four_percept_2act;
}

bool reversed(const InvasionConfig& cfg, long cycle) {
  return cfg.reversal_cycle && cycle >= *cfg.reversal_cycle;
}

}  // namespace

void InvasionConfig::validate() const {
  if (!(p_coh >= 0 && p_coh <= 1)) throw InvalidArgument("InvasionConfig: p_coh must lie in [0, 1]");
  if (four_percept(variant)) {
    if (!u_target) throw InvalidArgument("InvasionConfig: four-percept variants need a target unitary");
    if (u_target->rows() != 4 || !is_unitary(*u_target))
      throw InvalidArgument("InvasionConfig: target must be a 4x4 unitary");
  } else if (basis_mode == BasisMode::random_onb_per_cycle) {
    throw InvalidArgument("InvasionConfig: random bases apply to four-percept variants only");
  }
  if (color_introduction_cycle && !four_percept(variant))
    throw InvalidArgument("InvasionConfig: colour introduction applies to four-percept variants");
}

int InvasionConfig::memory_dim() const {
  return variant == InvasionVariant::neverending_color ? 8 : 4;
}

int InvasionConfig::action_count() const {
  return variant == InvasionVariant::four_percept_4act ? 4 : 2;
}

int invasion_percept_index(const InvasionConfig& cfg, int symbol, int color) {
  return four_percept(cfg.variant) ? 2 * symbol + color : symbol;
}

std::size_t invasion_correct_action(const InvasionConfig& cfg, long cycle, int percept_index) {
  const bool rev = reversed(cfg, cycle);
  switch (cfg.variant) {
    case InvasionVariant::two_symbol:
    case InvasionVariant::neverending_color:
      return static_cast<std::size_t>(rev ? 1 - percept_index : percept_index);
    case InvasionVariant::four_percept_4act: {
      // (j, k) is read as (1 - j, 1 - k) after reversal.
      return static_cast<std::size_t>(rev ? 3 - percept_index : percept_index);
    }
    case InvasionVariant::four_percept_2act: {
      const int symbol = percept_index / 2;
      return static_cast<std::size_t>(rev ? 1 - symbol : symbol);
    }
  }
  throw InvalidArgument("unknown invasion variant");
}

double invasion_step(const InvasionConfig& cfg, long cycle, std::size_t agent_action,
                     int percept_index) {
  return agent_action == invasion_correct_action(cfg, cycle, percept_index) ? cfg.reward_correct
                                                                            : cfg.reward_wrong;
}

InvasionGame::InvasionGame(InvasionConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  switch (cfg_.variant) {
    case InvasionVariant::two_symbol:
      fixed_povm_ = std::make_shared<PovmSet>(povm_action_subsystem(2, 2));
      break;
    case InvasionVariant::neverending_color:
      fixed_povm_ = std::make_shared<PovmSet>(povm_action_subsystem(4, 2));
      break;
    case InvasionVariant::four_percept_4act:
      fixed_povm_ = std::make_shared<PovmSet>(povm_rotated(*cfg_.u_target, false));
      break;
    case InvasionVariant::four_percept_2act:
      fixed_povm_ = std::make_shared<PovmSet>(povm_rotated(*cfg_.u_target, true));
      break;
  }
}

InvasionPercept InvasionGame::make_percept(int symbol, int color, const CMatrix* u_rotation,
                                           const DensityMatrix* rho_c) const {
  switch (cfg_.variant) {
    case InvasionVariant::two_symbol:
      return {symbol, 0, encode_invasion_2x2(symbol, cfg_.p_coh), fixed_povm_};
    case InvasionVariant::neverending_color: {
      if (!rho_c) throw InvalidArgument("make_percept: never-ending colours need a colour state");
      return {symbol, 0, encode_neverending(symbol, *rho_c), fixed_povm_};
    }
    case InvasionVariant::four_percept_4act:
    case InvasionVariant::four_percept_2act: {
      DensityMatrix state = encode_invasion_4(symbol, color);
      if (!u_rotation) return {symbol, color, std::move(state), fixed_povm_};
      // Prepare U_R rho U_R^dagger and measure in U_T U_R U_T^dagger (U_T basis).
      const CMatrix& ut = *cfg_.u_target;
      const CMatrix basis_change = ut * *u_rotation * ut.adjoint();
      return {symbol, color, state.conjugated(*u_rotation),
              std::make_shared<PovmSet>(fixed_povm_->conjugated(basis_change))};
    }
  }
  throw InvalidArgument("unknown invasion variant");
}

InvasionPercept InvasionGame::percept(long cycle, RngStream& rng) const {
  const int symbol = static_cast<int>(rng.index(2));
  int color = 0;
  if (four_percept(cfg_.variant)) {
    const bool single_color =
        cfg_.color_introduction_cycle && cycle < *cfg_.color_introduction_cycle;
    if (!single_color) color = static_cast<int>(rng.index(2));
    if (cfg_.basis_mode == BasisMode::random_onb_per_cycle) {
      const CMatrix u_r = random_unitary(4, rng);
      return make_percept(symbol, color, &u_r, nullptr);
    }
    return make_percept(symbol, color, nullptr, nullptr);
  }
  if (cfg_.variant == InvasionVariant::neverending_color) {
    const DensityMatrix rho_c = random_mixed_qubit(rng);
    return make_percept(symbol, 0, nullptr, &rho_c);
  }
  return make_percept(symbol, 0, nullptr, nullptr);
}

double InvasionGame::reward(long cycle, std::size_t action, const InvasionPercept& p) const {
  return invasion_step(cfg_, cycle, action, invasion_percept_index(cfg_, p.symbol, p.color));
}

double InvasionGame::expected_reward(long cycle, const std::vector<double>& dist,
                                     const InvasionPercept& p) const {
  const auto correct =
      invasion_correct_action(cfg_, cycle, invasion_percept_index(cfg_, p.symbol, p.color));
  double r = 0;
  for (std::size_t a = 0; a < dist.size(); ++a)
    r += dist[a] * (a == correct ? cfg_.reward_correct : cfg_.reward_wrong);
  return r;
}

InvasionPercept invasion_percept(const InvasionConfig& cfg, long cycle, RngStream& rng) {
  return InvasionGame(cfg).percept(cycle, rng);
}

// ---------------------------------------------------------------------------
// Grid world

const char* grid_action_name(int action) {
  static const char* names[] = {"right", "down", "left", "up"};
  if (action < 0 || action >= kGridActions) throw InvalidArgument("grid action out of range");
  return names[action];
}

void GridWorld::validate() const {
  if (width < 2 || height < 2) throw InvalidArgument("GridWorld: grid too small");
  auto inside = [&](Cell c) { return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width; };
  if (!inside(obstacle) || !inside(start) || !inside(goal))
    throw InvalidArgument("GridWorld: cell outside the grid");
  if (start == obstacle || goal == obstacle || start == goal)
    throw InvalidArgument("GridWorld: start, goal and obstacle must be distinct");
}

bool GridWorld::is_free(Cell c) const {
  return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width && !(c == obstacle);
}

std::vector<Cell> GridWorld::free_cells() const {
  std::vector<Cell> out;
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      if (is_free({r, c})) out.push_back({r, c});
  return out;
}

int GridWorld::free_count() const { return width * height - 1; }

int GridWorld::index_of(Cell c) const {
  if (!is_free(c)) throw InvalidArgument("GridWorld::index_of: cell is not free");
  const int raw = c.row * width + c.col;
  const int obs = obstacle.row * width + obstacle.col;
  return raw > obs ? raw - 1 : raw;
}

Cell GridWorld::cell_at(int index) const {
  if (index < 0 || index >= free_count()) throw InvalidArgument("GridWorld::cell_at: index range");
  const int obs = obstacle.row * width + obstacle.col;
  const int raw = index >= obs ? index + 1 : index;
  return {raw / width, raw % width};
}

Cell grid_reset(const GridWorld& gw, RngStream& rng) {
  if (!gw.random_start) return gw.start;
  std::vector<Cell> eligible;
  for (const Cell& c : gw.free_cells())
    if (!(c == gw.goal)) eligible.push_back(c);
  return eligible[rng.index(eligible.size())];
}

GridStep grid_step(const GridWorld& gw, Cell cell, int action) {
  static constexpr int dr[] = {0, 1, 0, -1};
  static constexpr int dc[] = {1, 0, -1, 0};
  if (action < 0 || action >= kGridActions) throw InvalidArgument("grid_step: action out of range");
  if (!gw.is_free(cell)) throw InvalidArgument("grid_step: agent is not on a free cell");
  const Cell target{cell.row + dr[action], cell.col + dc[action]};
  GridStep out;
  if (!gw.is_free(target)) {
    out.next = cell;
    out.hit_boundary = true;
    out.reward = gw.boundary_penalty.value_or(0.0);
    return out;
  }
  out.next = target;
  if (target == gw.goal) {
    out.reward = gw.goal_reward;
    out.terminal = true;
  }
  return out;
}

DensityMatrix grid_percept_state(const GridWorld& gw, Cell cell) {
  return encode_symbol_action(gw.index_of(cell), gw.free_count(), kGridActions, 1.0);
}

PovmSet grid_povm(const GridWorld& gw) {
  PovmSet base = povm_action_subsystem(gw.free_count(), kGridActions);
  std::vector<std::string> labels;
  std::vector<CMatrix> effects;
  for (int a = 0; a < kGridActions; ++a) {
    labels.emplace_back(grid_action_name(a));
    effects.push_back(base.effect(a));
  }
  return PovmSet(std::move(labels), std::move(effects));
}

namespace {

// Distance to the goal from every free cell (indexed by free-cell index).
std::vector<int> distances_to_goal(const GridWorld& gw) {
  const int n = gw.free_count();
  std::vector<int> dist(n, -1);
  // Moves are reversible on this grid (blocked moves are self-loops), so a
  // backwards search from the goal over grid_step neighbours is exact.
  std::deque<Cell> queue{gw.goal};
  dist[gw.index_of(gw.goal)] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    for (int a = 0; a < kGridActions; ++a) {
      const Cell nb = grid_step(gw, c, a).next;
      if (nb == c) continue;
      int& d = dist[gw.index_of(nb)];
      if (d < 0) {
        d = dist[gw.index_of(c)] + 1;
        queue.push_back(nb);
      }
    }
  }
  return dist;
}

}  // namespace

int grid_shortest_path(const GridWorld& gw, Cell from) {
  gw.validate();
  std::vector<int> dist(gw.free_count(), -1);
  std::deque<Cell> queue{from};
  dist[gw.index_of(from)] = 0;
  while (!queue.empty()) {
    const Cell c = queue.front();
    queue.pop_front();
    if (c == gw.goal) return dist[gw.index_of(c)];
    for (int a = 0; a < kGridActions; ++a) {
      const Cell nb = grid_step(gw, c, a).next;
      int& d = dist[gw.index_of(nb)];
      if (d < 0) {
        d = dist[gw.index_of(c)] + 1;
        queue.push_back(nb);
      }
    }
  }
  return -1;
}

std::vector<double> grid_hitting_times(const GridWorld& gw) {
  gw.validate();
  const int n = gw.free_count();
  const int goal = gw.index_of(gw.goal);
  // (I - Q) t = 1 over the transient cells; the goal row pins t = 0.
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(n);
  b(goal) = 0.0;
  for (int i = 0; i < n; ++i) {
    if (i == goal) continue;
    for (int act = 0; act < kGridActions; ++act) {
      const int j = gw.index_of(grid_step(gw, gw.cell_at(i), act).next);
      if (j != goal) a(i, j) -= 1.0 / kGridActions;
    }
  }
  const Eigen::VectorXd t = a.partialPivLu().solve(b);
  return {t.data(), t.data() + n};
}

std::vector<std::vector<int>> grid_optimal_actions(const GridWorld& gw) {
  gw.validate();
  const auto dist = distances_to_goal(gw);
  std::vector<std::vector<int>> out(gw.free_count());
  for (int i = 0; i < gw.free_count(); ++i) {
    const Cell c = gw.cell_at(i);
    if (c == gw.goal) continue;
    for (int a = 0; a < kGridActions; ++a) {
      const Cell nb = grid_step(gw, c, a).next;
      if (!(nb == c) && dist[gw.index_of(nb)] == dist[i] - 1) out[i].push_back(a);
    }
  }
  return out;
}

Eigen::MatrixXd grid_policy_table(const std::function<std::vector<double>(Cell)>& policy,
                                  const GridWorld& gw) {
  Eigen::MatrixXd table(gw.free_count(), kGridActions);
  for (int i = 0; i < gw.free_count(); ++i) {
    const auto row = policy(gw.cell_at(i));
    if (static_cast<int>(row.size()) != kGridActions)
      throw InvalidArgument("grid_policy_table: policy must cover four actions");
    for (int a = 0; a < kGridActions; ++a) table(i, a) = row[a];
  }
  return table;
}

}  // namespace qmem
