#include "phonemv/train/trainer.hpp"

#include "phonemv/errors.hpp"
#include "phonemv/eval/discrimination.hpp"
#include "phonemv/net/bilstm.hpp"
#include "phonemv/util/parallel.hpp"
#include "phonemv/util/rng.hpp"

#include <algorithm>
#include <cstdio>

namespace phonemv::train {

namespace {

// Sub-stream tags for derive_seed.
enum : std::uint64_t {
  kInitF = 1,
  kInitG = 2,
  kSample = 3,
  kShuffle = 4,
  kDropout = 5,
  kDevPairs = 6,
};

net::ForwardOptions dropout(const TrainSchedule& s, int epoch, std::size_t item,
                            std::uint64_t role) {
  return net::ForwardOptions::train(util::derive_seed(
      {s.seed, kDropout, static_cast<std::uint64_t>(epoch), item, role}));
}

struct ItemResult {
  double loss = 0.0;
  net::NetGradients f;
  net::NetGradients g;
};

using ItemFn = std::function<void(const net::NetParams& f, const net::NetParams* g,
                                  int epoch, std::size_t item, ItemResult& out)>;

// Shared epoch/batch loop. Per-item gradients are computed independently and
// summed in item order, so results do not depend on the worker count.
TrainResult run(const PreparedCorpus& data, net::NetParams f,
                std::optional<net::NetParams> g, const TrainSchedule& schedule,
                const AdadeltaConfig& optimizer, const TrainOptions& options,
                const std::function<std::size_t(int epoch)>& begin_epoch,
                const ItemFn& item_fn) {
  auto state_f = AdadeltaState::init(optimizer, f.config);
  std::optional<AdadeltaState> state_g;
  if (g) state_g = AdadeltaState::init(optimizer, g->config);

  TrainResult result{f, g, {}, std::nullopt, 0};
  const auto batch = static_cast<std::size_t>(schedule.batch_size);
  std::vector<ItemResult> items(batch);
  for (int epoch = 1; epoch <= schedule.max_epochs; ++epoch) {
    const std::size_t n = begin_epoch(epoch);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t count = std::min(batch, n - start);
      util::parallel_for(count, options.workers, [&](std::size_t k) {
        auto& r = items[k];
        r.loss = 0.0;
        if (r.f.lstm.empty()) r.f = net::NetParams::zeros(f.config);
        else net::set_zero(r.f);
        if (g) {
          if (r.g.lstm.empty()) r.g = net::NetParams::zeros(g->config);
          else net::set_zero(r.g);
        }
        item_fn(f, g ? &*g : nullptr, epoch, start + k, r);
      });
      net::NetGradients sum_f = net::NetParams::zeros(f.config);
      std::optional<net::NetGradients> sum_g;
      if (g) sum_g = net::NetParams::zeros(g->config);
      for (std::size_t k = 0; k < count; ++k) {
        loss_sum += items[k].loss;
        net::add_scaled(sum_f, items[k].f, 1.0);
        if (g) net::add_scaled(*sum_g, items[k].g, 1.0);
      }
      const double scale = 1.0 / static_cast<double>(count);
      net::NetGradients mean_f = net::NetParams::zeros(f.config);
      net::add_scaled(mean_f, sum_f, scale);
      adadelta_step(f, state_f, mean_f);
      if (g) {
        net::NetGradients mean_g = net::NetParams::zeros(g->config);
        net::add_scaled(mean_g, *sum_g, scale);
        adadelta_step(*g, *state_g, mean_g);
      }
    }

    HistoryEntry entry{epoch, n == 0 ? 0.0 : loss_sum / static_cast<double>(n),
                       std::nullopt};
    if (epoch % schedule.ap_every == 0) {
      entry.dev_ap = dev_average_precision(f, data.dev, data.x_dev, schedule,
                                           options.workers);
      if (!result.best_ap || *entry.dev_ap > *result.best_ap) {
        result.best_ap = entry.dev_ap;
        result.best_epoch = epoch;
        result.f = f;
        result.g = g;
      }
    }
    result.history.entries.push_back(entry);
    if (options.on_epoch) options.on_epoch(entry);
  }
  if (!result.best_ap) {
    result.best_epoch = schedule.max_epochs;
    result.f = std::move(f);
    result.g = std::move(g);
  }
  return result;
}

void check_prepared(const PreparedCorpus& data, bool multi) {
  if (data.train.size() != data.x_train.size() || data.dev.size() != data.x_dev.size()) {
    throw ValidationError("training data: features do not match segments");
  }
  if (data.dev.size() < 2) throw ValidationError("training data: dev split needs >= 2 segments");
  if (multi && (!data.multi || data.y_train.size() != data.train.size())) {
    throw ValidationError("training data: multi-source view not prepared");
  }
}

}  // namespace

void TrainSchedule::validate() const {
  if (max_epochs < 1) throw ValidationError("schedule: max_epochs must be >= 1");
  if (ap_every < 1) throw ValidationError("schedule: ap_every must be >= 1");
  if (batch_size < 1) throw ValidationError("schedule: batch_size must be >= 1");
  if (dev_max_pairs < 1) throw ValidationError("schedule: dev_max_pairs must be >= 1");
  losses::Margin{margin};
}

std::optional<double> History::best_ap() const {
  std::optional<double> best;
  for (const auto& e : entries) {
    if (e.dev_ap && (!best || *e.dev_ap > *best)) best = e.dev_ap;
  }
  return best;
}

std::string History::to_csv() const {
  std::string out = "epoch,mean_loss,dev_ap\n";
  char line[96];
  for (const auto& e : entries) {
    std::snprintf(line, sizeof line, "%d,%.17g,", e.epoch, e.mean_loss);
    out += line;
    if (e.dev_ap) {
      std::snprintf(line, sizeof line, "%.17g", *e.dev_ap);
      out += line;
    }
    out += "\n";
  }
  return out;
}

PreparedCorpus prepare_corpus(const corpus::SegmentSet& all,
                              const corpus::PipelineConfig& pipeline,
                              const std::optional<std::string>& multi_view) {
  PreparedCorpus d;
  d.train = all.filter(Split::kTrain);
  d.dev = all.filter(Split::kDev);
  if (d.train.size() == 0) throw ValidationError("corpus has no train segments");
  if (d.dev.size() == 0) throw ValidationError("corpus has no dev segments");
  d.acoustic = corpus::FeaturePipeline::fit(d.train, corpus::kAcousticView, pipeline);
  d.x_train = corpus::prepare_view(d.train, corpus::kAcousticView, d.acoustic);
  d.x_dev = corpus::prepare_view(d.dev, corpus::kAcousticView, d.acoustic);
  if (multi_view) {
    if (*multi_view == corpus::kAcousticView) {
      throw ValidationError("multi-source view must differ from the acoustic view");
    }
    d.multi = corpus::FeaturePipeline::fit(d.train, *multi_view, pipeline);
    d.y_train = corpus::prepare_view(d.train, *multi_view, *d.multi);
  }
  return d;
}

double dev_average_precision(const net::NetParams& f, const corpus::SegmentSet& dev,
                             const std::vector<FeatureMatrix>& x_dev,
                             const TrainSchedule& schedule, int workers) {
  std::vector<Embedding> emb(x_dev.size());
  util::parallel_for(x_dev.size(), workers,
                     [&](std::size_t i) { emb[i] = net::embed(f, x_dev[i]); });
  const auto pairs = eval::discrimination_pairs(
      dev, emb, schedule.dev_max_pairs, util::derive_seed({schedule.seed, kDevPairs}));
  return eval::average_precision(pairs);
}

TrainResult train_single_view(const PreparedCorpus& data, net::NetConfig config,
                              const TrainSchedule& schedule,
                              const AdadeltaConfig& optimizer,
                              const TrainOptions& options) {
  schedule.validate();
  check_prepared(data, false);
  config.input_dims = static_cast<int>(data.acoustic.output_dims());
  const losses::Margin margin(schedule.margin);
  auto f = net::init_params(config, util::derive_seed({schedule.seed, kInitF}));

  std::vector<Triplet> triplets;
  auto begin_epoch = [&](int epoch) {
    const auto e = static_cast<std::uint64_t>(epoch);
    triplets = sample_triplets(data.train,
                               util::derive_seed({schedule.seed, kSample, e}),
                               schedule.sampling);
    util::Rng rng(util::derive_seed({schedule.seed, kShuffle, e}));
    std::shuffle(triplets.begin(), triplets.end(), rng);
    return triplets.size();
  };
  auto item_fn = [&](const net::NetParams& net, const net::NetParams*, int epoch,
                     std::size_t i, ItemResult& out) {
    const auto& t = triplets[i];
    const auto a = net::forward(net, data.x_train[t.anchor], dropout(schedule, epoch, i, 0));
    const auto p = net::forward(net, data.x_train[t.positive], dropout(schedule, epoch, i, 1));
    const auto n = net::forward(net, data.x_train[t.negative], dropout(schedule, epoch, i, 2));
    const auto l = losses::triplet_loss<double>(a.output, p.output, n.output, margin);
    out.loss = l.value;
    if (l.value <= 0.0) return;
    net::accumulate_backward(net, a, l.d_anchor, out.f);
    net::accumulate_backward(net, p, l.d_positive, out.f);
    net::accumulate_backward(net, n, l.d_negative, out.f);
  };
  return run(data, std::move(f), std::nullopt, schedule, optimizer, options,
             begin_epoch, item_fn);
}

TrainResult train_multi_view(const PreparedCorpus& data, losses::Objective objective,
                             net::NetConfig config, const TrainSchedule& schedule,
                             const AdadeltaConfig& optimizer,
                             const TrainOptions& options) {
  schedule.validate();
  check_prepared(data, true);
  config.input_dims = static_cast<int>(data.acoustic.output_dims());
  net::NetConfig g_config = config;
  g_config.input_dims = static_cast<int>(data.multi->output_dims());
  const losses::Margin margin(schedule.margin);
  auto f = net::init_params(config, util::derive_seed({schedule.seed, kInitF}));
  auto g = net::init_params(g_config, util::derive_seed({schedule.seed, kInitG}));

  const bool use_x_neg = objective != losses::Objective::kObj0;
  const bool use_y_neg = objective != losses::Objective::kObj1;
  std::vector<CrossViewItem> batch_items;
  auto begin_epoch = [&](int epoch) {
    const auto e = static_cast<std::uint64_t>(epoch);
    batch_items = sample_crossview(data.train, data.multi->view(),
                                   util::derive_seed({schedule.seed, kSample, e}));
    util::Rng rng(util::derive_seed({schedule.seed, kShuffle, e}));
    std::shuffle(batch_items.begin(), batch_items.end(), rng);
    return batch_items.size();
  };
  auto item_fn = [&](const net::NetParams& fn, const net::NetParams* gn, int epoch,
                     std::size_t i, ItemResult& out) {
    const auto& it = batch_items[i];
    const auto fx_pos = net::forward(fn, data.x_train[it.x_pos], dropout(schedule, epoch, i, 0));
    const auto gy_pos = net::forward(*gn, data.y_train[it.y_pos], dropout(schedule, epoch, i, 2));
    std::optional<net::ForwardTape> fx_neg, gy_neg;
    if (use_x_neg) {
      fx_neg = net::forward(fn, data.x_train[it.x_neg], dropout(schedule, epoch, i, 1));
    }
    if (use_y_neg) {
      gy_neg = net::forward(*gn, data.y_train[it.y_neg], dropout(schedule, epoch, i, 3));
    }
    losses::CrossViewLoss<double> l;
    switch (objective) {
      case losses::Objective::kObj0:
        l = losses::obj0_loss<double>(fx_pos.output, gy_pos.output, gy_neg->output, margin);
        break;
      case losses::Objective::kObj1:
        l = losses::obj1_loss<double>(fx_pos.output, gy_pos.output, fx_neg->output, margin);
        break;
      case losses::Objective::kBoth:
        l = losses::combined_loss<double>(fx_pos.output, gy_pos.output, gy_neg->output,
                                          fx_neg->output, margin);
        break;
    }
    out.loss = l.value;
    if (l.value <= 0.0) return;
    net::accumulate_backward(fn, fx_pos, l.d_fx_pos, out.f);
    net::accumulate_backward(*gn, gy_pos, l.d_gy_pos, out.g);
    if (fx_neg) net::accumulate_backward(fn, *fx_neg, l.d_fx_neg, out.f);
    if (gy_neg) net::accumulate_backward(*gn, *gy_neg, l.d_gy_neg, out.g);
  };
  return run(data, std::move(f), std::move(g), schedule, optimizer, options,
             begin_epoch, item_fn);
}

double epoch_triplet_loss(const std::vector<Triplet>& triplets,
                          const std::vector<Embedding>& embeddings,
                          const losses::Margin& margin) {
  if (triplets.empty()) throw ValidationError("epoch_triplet_loss: no triplets");
  double sum = 0.0;
  for (const auto& t : triplets) {
    if (std::max({t.anchor, t.positive, t.negative}) >= embeddings.size()) {
      throw ValidationError("epoch_triplet_loss: triplet index out of range");
    }
    sum += losses::triplet_loss<double>(embeddings[t.anchor], embeddings[t.positive],
                                        embeddings[t.negative], margin)
               .value;
  }
  return sum / static_cast<double>(triplets.size());
}

}  // namespace phonemv::train
