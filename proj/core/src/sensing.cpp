#include "roix/sensing.hpp"

#include <algorithm>
#include <stdexcept>

#include <json.hpp>

namespace roix {

bool classify_cell(bool true_is_roi, const SensorModel& model, Rng& rng) {
  if (model.majority_threshold < 1 || model.majority_threshold > model.samples_per_cell)
    throw std::invalid_argument("need 0 < majority_threshold <= samples_per_cell");
  int positives = 0;
  for (int i = 0; i < model.samples_per_cell; ++i) {
    const bool flip = rng.next_bernoulli(true_is_roi ? model.p_fn : model.p_fp);
    const bool detected = true_is_roi ? !flip : flip;
    if (detected) ++positives;
  }
  return positives >= model.majority_threshold;
}

const char* belief_label_name(BeliefLabel l) {
  switch (l) {
    case BeliefLabel::Unknown: return "unknown";
    case BeliefLabel::NonRoi: return "non_roi";
    case BeliefLabel::RoiUnexplored: return "roi_unexplored";
    case BeliefLabel::RoiExplored: return "roi_explored";
  }
  return "?";
}

BeliefLabel belief_label_from_name(const std::string& name) {
  if (name == "unknown") return BeliefLabel::Unknown;
  if (name == "non_roi") return BeliefLabel::NonRoi;
  if (name == "roi_unexplored") return BeliefLabel::RoiUnexplored;
  if (name == "roi_explored") return BeliefLabel::RoiExplored;
  throw std::invalid_argument("unknown belief label: " + name);
}

BeliefLabel BeliefMap::label(Cell c) const {
  auto it = labels_.find(c);
  return it == labels_.end() ? BeliefLabel::Unknown : it->second;
}

void BeliefMap::update(Cell c, bool detection) {
  BeliefLabel& l = labels_.try_emplace(c, BeliefLabel::Unknown).first->second;
  if (detection) {
    if (l != BeliefLabel::RoiExplored) l = BeliefLabel::RoiUnexplored;
  } else {
    // Positive beliefs are never reversed.
    if (l == BeliefLabel::Unknown || l == BeliefLabel::NonRoi) l = BeliefLabel::NonRoi;
  }
}

void BeliefMap::mark_explored(Cell c) {
  auto it = labels_.find(c);
  if (it != labels_.end() && it->second == BeliefLabel::RoiUnexplored)
    it->second = BeliefLabel::RoiExplored;
}

int BeliefMap::believed_roi_count() const {
  int n = 0;
  for (const auto& [c, l] : labels_)
    if (l == BeliefLabel::RoiUnexplored || l == BeliefLabel::RoiExplored) ++n;
  return n;
}

std::vector<Cell> BeliefMap::believed_roi_cells() const {
  std::vector<Cell> cells;
  for (const auto& [c, l] : labels_)
    if (l == BeliefLabel::RoiUnexplored || l == BeliefLabel::RoiExplored)
      cells.push_back(c);
  std::sort(cells.begin(), cells.end());
  return cells;
}

std::string BeliefMap::serialize() const {
  std::vector<std::pair<Cell, BeliefLabel>> entries(labels_.begin(), labels_.end());
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [c, l] : entries) j.push_back({c.x, c.y, belief_label_name(l)});
  return j.dump();
}

BeliefMap BeliefMap::deserialize(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  BeliefMap map;
  for (const auto& je : j) {
    const Cell c{je.at(0).get<int>(), je.at(1).get<int>()};
    map.labels_[c] = belief_label_from_name(je.at(2).get<std::string>());
  }
  return map;
}

NeighborFlags NoisySession::sense(Context& ctx, Cell c) {
  NeighborFlags flags;
  for (Direction d : kDirectionOrder) {
    const Cell n = offset(c, d);
    const bool truth = ctx.world->contains(n);
    const bool detected = classify_cell(truth, ctx.model, ctx.rng);
    if (detected && truth) ++ctx.confusion.tp;
    if (detected && !truth) ++ctx.confusion.fp;
    if (!detected && !truth) ++ctx.confusion.tn;
    if (!detected && truth) ++ctx.confusion.fn;
    ctx.belief.update(n, detected);
    const BeliefLabel l = ctx.belief.label(n);
    flags.set(d, l == BeliefLabel::RoiUnexplored || l == BeliefLabel::RoiExplored);
  }
  return flags;
}

NoisySession::NoisySession(const GridRoi& world, ExploreParams params,
                           SensorModel model)
    : ctx_(std::make_unique<Context>()) {
  ctx_->world = &world;
  ctx_->model = model;
  ctx_->rng = Rng(model.rng_seed);
  // The start cell is where the ROI was first observed; it is believed
  // without a classifier draw.
  ctx_->belief.update(world.start_cell(), true);

  Context* ctx = ctx_.get();
  sim_ = std::make_unique<DfsSimulator>(
      world.start_cell(), params, world.translation_dir(),
      [ctx](Cell c) { return sense(*ctx, c); });
}

bool NoisySession::done() const { return sim_->done(); }

void NoisySession::advance() { sim_->advance(); }

std::string NoisySession::save_resume_state() const {
  nlohmann::json j;
  j["format"] = "roix-resume-v1";
  j["model"] = {{"p_fp", ctx_->model.p_fp},
                {"p_fn", ctx_->model.p_fn},
                {"samples_per_cell", ctx_->model.samples_per_cell},
                {"majority_threshold", ctx_->model.majority_threshold},
                {"rng_seed", ctx_->model.rng_seed}};
  const auto state = ctx_->rng.state();
  j["rng_state"] = {state[0], state[1], state[2], state[3]};
  j["belief"] = nlohmann::json::parse(ctx_->belief.serialize());
  j["confusion"] = {{"tp", ctx_->confusion.tp},
                    {"fp", ctx_->confusion.fp},
                    {"tn", ctx_->confusion.tn},
                    {"fn", ctx_->confusion.fn}};
  j["sim"] = nlohmann::json::parse(sim_->save_state());
  return j.dump();
}

NoisySession NoisySession::load_resume_state(const std::string& json_text,
                                             const GridRoi& world) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  if (!j.contains("format") || j["format"] != "roix-resume-v1")
    throw std::runtime_error("unrecognized resume document format");

  auto ctx = std::make_unique<Context>();
  ctx->world = &world;
  const auto& jm = j.at("model");
  ctx->model.p_fp = jm.at("p_fp").get<double>();
  ctx->model.p_fn = jm.at("p_fn").get<double>();
  ctx->model.samples_per_cell = jm.at("samples_per_cell").get<int>();
  ctx->model.majority_threshold = jm.at("majority_threshold").get<int>();
  ctx->model.rng_seed = jm.at("rng_seed").get<uint64_t>();
  const auto& js = j.at("rng_state");
  ctx->rng.set_state({js.at(0).get<uint64_t>(), js.at(1).get<uint64_t>(),
                      js.at(2).get<uint64_t>(), js.at(3).get<uint64_t>()});
  ctx->belief = BeliefMap::deserialize(j.at("belief").dump());
  const auto& jc = j.at("confusion");
  ctx->confusion = {jc.at("tp").get<long>(), jc.at("fp").get<long>(),
                    jc.at("tn").get<long>(), jc.at("fn").get<long>()};

  NoisySession session(std::move(ctx));
  Context* raw = session.ctx_.get();
  session.sim_ = std::make_unique<DfsSimulator>(DfsSimulator::restore(
      j.at("sim").dump(), [raw](Cell c) { return sense(*raw, c); }));
  return session;
}

NoisyExplorationResult NoisySession::finish() && {
  NoisyExplorationResult out;
  out.run = std::move(*sim_).take_run();

  for (VertexId v = 0; v < out.run.tree.vertex_count(); ++v) {
    const Vertex& vx = out.run.tree.vertex(v);
    if (!vx.is_dummy() && vx.state == VertexState::Explored)
      ctx_->belief.mark_explored(*vx.cell);
  }
  out.belief = std::move(ctx_->belief);
  out.confusion = ctx_->confusion;

  const GridRoi& world = *ctx_->world;
  const std::vector<Cell> believed = out.belief.believed_roi_cells();
  int intersection = 0;
  for (const Cell& c : believed)
    if (world.contains(c)) ++intersection;
  const int uni = static_cast<int>(believed.size()) + world.cell_count() - intersection;
  out.iou = uni > 0 ? static_cast<double>(intersection) / uni : 1.0;
  out.true_cells_missed = world.cell_count() - intersection;
  out.disconnected = out.true_cells_missed > 0;
  return out;
}

NoisyExplorationResult noisy_explore(const GridRoi& world, ExploreParams params,
                                     SensorModel model) {
  NoisySession session(world, params, model);
  while (!session.done()) session.advance();
  return std::move(session).finish();
}

}  // namespace roix
