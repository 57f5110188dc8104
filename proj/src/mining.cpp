#include "provex/mining.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "provex/error.hpp"
#include "provex/fragments.hpp"

namespace provex {

void MiningParams::validate() const {
    if (k < 0) throw InputError("k must be >= 0");
    if (k_cat < 1) throw InputError("k-cat must be >= 1");
    if (max_edges < 0) throw InputError("max-edges must be >= 0");
    if (sel_attrs < 1) throw InputError("sel-attrs must be >= 1");
    if (max_num_attrs < 0) throw InputError("max-num-attrs must be >= 0");
    if (!(pat_sample > 0.0 && pat_sample <= 1.0)) {
        throw InputError("pat-sample must be in (0, 1]");
    }
    if (!(f1_sample > 0.0 && f1_sample <= 1.0)) throw InputError("f1-sample must be in (0, 1]");
    if (recall_threshold < 0.0) throw InputError("recall-threshold must be >= 0");
    if (fragments < 1) throw InputError("fragments must be >= 1");
    if (cost_threshold < 0.0) throw InputError("cost-threshold must be >= 0");
    if (lca_row_cap < 1) throw InputError("lca row cap must be >= 1");
}

std::vector<LcaCandidate> lca_candidates(const AptTable& apt,
                                         const std::vector<std::uint32_t>& sample_rows,
                                         const std::vector<int>& categorical_cols) {
    // Keyed by the agreed code vector; -1 marks disagreement or null.
    std::unordered_map<std::string, std::pair<std::vector<std::int32_t>, std::int64_t>> pool;
    const std::size_t n = sample_rows.size();
    std::vector<std::int32_t> agreed(categorical_cols.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool any = false;
            for (std::size_t c = 0; c < categorical_cols.size(); ++c) {
                const auto& col = apt.columns[categorical_cols[c]];
                const std::int32_t a = col.codes[sample_rows[i]];
                const std::int32_t b = col.codes[sample_rows[j]];
                if (a >= 0 && a == b) {
                    agreed[c] = a;
                    any = true;
                } else {
                    agreed[c] = -1;
                }
            }
            if (!any) continue;  // the all-wildcard pattern is discarded
            std::string key;
            key.reserve(agreed.size() * 4);
            for (const auto code : agreed) {
                key += std::to_string(code);
                key.push_back(',');
            }
            auto [it, inserted] = pool.try_emplace(key, std::make_pair(agreed, 0));
            ++it->second.second;
        }
    }

    std::vector<LcaCandidate> out;
    out.reserve(pool.size());
    for (auto& [key, entry] : pool) {
        LcaCandidate cand;
        cand.frequency = entry.second;
        for (std::size_t c = 0; c < categorical_cols.size(); ++c) {
            if (entry.first[c] < 0) continue;
            const auto& col = apt.columns[categorical_cols[c]];
            Predicate p;
            p.attr = col.name;
            p.op = CmpOp::eq;
            p.constant = Value{col.dict[entry.first[c]]};
            cand.pattern.predicates.emplace(p.attr, std::move(p));
        }
        out.push_back(std::move(cand));
    }
    std::sort(out.begin(), out.end(), [](const LcaCandidate& a, const LcaCandidate& b) {
        return a.pattern.canonical() < b.pattern.canonical();
    });
    return out;
}

std::vector<MinedCandidate> pick_top_k_cat(const std::vector<LcaCandidate>& candidates,
                                           int k_cat, const AptTable& apt,
                                           const std::vector<int>& targets,
                                           const PtSample& sample, double recall_threshold,
                                           MiningTrace* trace) {
    std::vector<MinedCandidate> out;
    out.reserve(candidates.size());
    for (const auto& cand : candidates) {
        MinedCandidate mc;
        mc.pattern = cand.pattern;
        mc.frequency = cand.frequency;
        CompiledPattern cp(mc.pattern, apt);
        for (const int t : targets) {
            mc.est_recall.push_back(recall_of(cp, apt, t, &sample));
            mc.shortlisted.push_back(0);
        }
        out.push_back(std::move(mc));
    }

    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        std::vector<int> order;
        for (int i = 0; i < static_cast<int>(out.size()); ++i) {
            if (out[i].est_recall[ti] >= recall_threshold) {
                order.push_back(i);
            } else if (trace) {
                trace->pruned.push_back(
                    MiningTrace::Pruned{out[i].pattern, targets[ti], out[i].est_recall[ti]});
            }
        }
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (out[a].est_recall[ti] != out[b].est_recall[ti]) {
                return out[a].est_recall[ti] > out[b].est_recall[ti];
            }
            if (out[a].frequency != out[b].frequency) return out[a].frequency > out[b].frequency;
            return out[a].pattern.canonical() < out[b].pattern.canonical();
        });
        for (std::size_t i = 0; i < order.size() && i < static_cast<std::size_t>(k_cat); ++i) {
            out[order[i]].shortlisted[ti] = 1;
        }
    }

    std::vector<MinedCandidate> kept;
    for (auto& mc : out) {
        bool any = false;
        for (const auto s : mc.shortlisted) any = any || s;
        if (any) kept.push_back(std::move(mc));
    }
    return kept;
}

std::vector<Pattern> refine(const Pattern& base, const std::vector<int>& numeric_cols,
                            const std::vector<std::vector<double>>& boundaries,
                            const AptTable& apt, int max_num_attrs, bool with_eq) {
    int numeric_preds = 0;
    for (const auto& [attr, pred] : base.predicates) {
        const int col = apt.column_index(attr);
        if (col >= 0 && apt.columns[col].kind == ColumnKind::numeric) ++numeric_preds;
    }
    std::vector<Pattern> out;
    if (numeric_preds >= max_num_attrs) return out;

    for (std::size_t i = 0; i < numeric_cols.size(); ++i) {
        const auto& col = apt.columns[numeric_cols[i]];
        if (base.constrains(col.name)) continue;
        for (const double c : boundaries[i]) {
            for (const CmpOp op : {CmpOp::le, CmpOp::ge, CmpOp::eq}) {
                if (op == CmpOp::eq && !with_eq) continue;
                Predicate p;
                p.attr = col.name;
                p.op = op;
                p.constant = Value{c};
                out.push_back(base.with(p));
            }
        }
    }
    return out;
}

double match_score(const Pattern& phi, const Pattern& other, const std::string& attr) {
    auto mine = phi.predicates.find(attr);
    if (mine == phi.predicates.end()) return 0.0;  // wildcard attrs do not contribute
    auto theirs = other.predicates.find(attr);
    if (theirs == other.predicates.end()) return 1.0;
    return mine->second.same_condition(theirs->second) ? -2.0 : -0.3;
}

double diversity_score(const Pattern& phi, const Pattern& other) {
    if (phi.predicates.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& [attr, pred] : phi.predicates) sum += match_score(phi, other, attr);
    return sum / static_cast<double>(phi.predicates.size());
}

namespace {

bool scored_before(const ScoredPattern& a, const ScoredPattern& b) {
    if (a.metrics.fscore != b.metrics.fscore) return a.metrics.fscore > b.metrics.fscore;
    const std::string ca = a.pattern.canonical();
    const std::string cb = b.pattern.canonical();
    if (ca != cb) return ca < cb;
    return a.target < b.target;
}

}  // namespace

std::vector<ScoredPattern> diversity_top_k(const std::vector<ScoredPattern>& scored, int k) {
    std::vector<ScoredPattern> pool;
    {
        std::unordered_set<std::string> seen;
        std::vector<ScoredPattern> sorted = scored;
        std::sort(sorted.begin(), sorted.end(), scored_before);
        for (auto& s : sorted) {
            const std::string key = s.pattern.canonical() + "#" + std::to_string(s.target);
            if (seen.insert(key).second) pool.push_back(std::move(s));
        }
    }

    std::vector<ScoredPattern> picked;
    if (k <= 0 || pool.empty()) return picked;

    picked.push_back(pool.front());
    pool.erase(pool.begin());

    // Incremental min-diversity against the picked set: one update per
    // candidate per round.
    std::vector<double> min_div(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        min_div[i] = diversity_score(pool[i].pattern, picked.back().pattern);
    }

    while (static_cast<int>(picked.size()) < k && !pool.empty()) {
        double best_w = 0.0;
        std::size_t best = 0;
        bool have = false;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            const double w = pool[i].metrics.fscore + min_div[i];
            if (!have || w > best_w ||
                (w == best_w && scored_before(pool[i], pool[best]))) {
                best_w = w;
                best = i;
                have = true;
            }
        }
        picked.push_back(pool[best]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
        min_div.erase(min_div.begin() + static_cast<std::ptrdiff_t>(best));
        for (std::size_t i = 0; i < pool.size(); ++i) {
            min_div[i] =
                std::min(min_div[i], diversity_score(pool[i].pattern, picked.back().pattern));
        }
    }
    return picked;
}

std::vector<Explanation> mine_apt(const Database& db, const Query& q, const ProvenanceTable& pt,
                                  const JoinGraph& jg, const SchemaGraph& schema,
                                  const std::vector<int>& targets, const MiningParams& params,
                                  MiningTrace* trace) {
    params.validate();
    if (targets.empty()) throw InputError("mining needs at least one target tuple");
    const bool two_point = targets.size() == 2;

    const std::string signature = jg.signature(schema);
    AptTable apt = materialize(q, db, pt, jg, schema, params.apt_row_cap);
    if (apt.n_rows == 0 || params.k == 0) return {};

    Rng rng(mix_seed(params.seed, signature));
    Rng rng_pat(rng.next_u64());
    Rng rng_f1(rng.next_u64());
    Rng rng_forest(rng.next_u64());

    const PtSample pat_sample = PtSample::bernoulli(apt, params.pat_sample, rng_pat);
    const PtSample f1_sample = PtSample::bernoulli(apt, params.f1_sample, rng_f1);

    FilteredAttrs attrs = filter_attrs(apt, targets[0],
                                       two_point ? std::optional<int>(targets[1]) : std::nullopt,
                                       params.sel_attrs, params.feature_filter, rng_forest);

    // LCA sample: all extensions of the sampled PT rows, capped.
    std::vector<std::uint32_t> sample_rows;
    for (std::uint32_t r = 0; r < apt.n_rows; ++r) {
        if (!pat_sample.kept(apt.pt_row_of[r])) continue;
        sample_rows.push_back(r);
        if (sample_rows.size() >= static_cast<std::size_t>(params.lca_row_cap)) break;
    }

    auto lca = lca_candidates(apt, sample_rows, attrs.categorical);
    if (trace) trace->lca_pool = lca;

    auto todo_seed = pick_top_k_cat(lca, params.k_cat, apt, targets, f1_sample,
                                    params.recall_threshold, trace);

    std::vector<std::vector<double>> boundaries;
    boundaries.reserve(attrs.numeric.size());
    for (const int col : attrs.numeric) {
        boundaries.push_back(fragment_boundaries(apt, col, params.fragments));
    }

    // Breadth-first refinement over the canonical done-set. Every pattern
    // popped is scored for each target whose recall clears the threshold;
    // the proposition guarantees no refinement can recover a pruned target.
    std::deque<Pattern> todo;
    std::unordered_set<std::string> done;
    std::sort(todo_seed.begin(), todo_seed.end(),
              [](const MinedCandidate& a, const MinedCandidate& b) {
                  const double ra = *std::max_element(a.est_recall.begin(), a.est_recall.end());
                  const double rb = *std::max_element(b.est_recall.begin(), b.est_recall.end());
                  if (ra != rb) return ra > rb;
                  return a.pattern.canonical() < b.pattern.canonical();
              });
    for (const auto& mc : todo_seed) {
        if (done.insert(mc.pattern.canonical()).second) todo.push_back(mc.pattern);
    }

    std::map<std::string, ScoredPattern> scored;  // canonical#target -> entry
    while (!todo.empty()) {
        Pattern cur = std::move(todo.front());
        todo.pop_front();

        CompiledPattern cp(cur, apt);
        bool refinable = false;
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
            const double rec = recall_of(cp, apt, targets[ti], &f1_sample);
            if (rec < params.recall_threshold) {
                if (trace) trace->pruned.push_back(MiningTrace::Pruned{cur, targets[ti], rec});
                continue;
            }
            refinable = true;
            ScoredPattern sp;
            sp.pattern = cur;
            sp.target = targets[ti];
            sp.metrics = metrics(cp, apt, targets[ti],
                                 two_point ? std::optional<int>(targets[1 - ti]) : std::nullopt,
                                 &f1_sample);
            scored.emplace(cur.canonical() + "#" + std::to_string(sp.target), std::move(sp));
        }
        if (!refinable) continue;
        for (auto& next :
             refine(cur, attrs.numeric, boundaries, apt, params.max_num_attrs,
                    params.numeric_eq_refinements)) {
            if (done.insert(next.canonical()).second) todo.push_back(std::move(next));
        }
    }

    // Each pattern reports its better target as the primary tuple.
    std::vector<ScoredPattern> collapsed;
    for (auto& [key, sp] : scored) {
        const std::string canonical = sp.pattern.canonical();
        if (two_point) {
            const std::string other_key =
                canonical + "#" + std::to_string(sp.target == targets[0] ? targets[1]
                                                                         : targets[0]);
            auto other = scored.find(other_key);
            if (other != scored.end()) {
                if (other->second.metrics.fscore > sp.metrics.fscore) continue;
                if (other->second.metrics.fscore == sp.metrics.fscore &&
                    other->second.target == targets[0] && sp.target != targets[0]) {
                    continue;  // tie goes to t1
                }
            }
        }
        collapsed.push_back(sp);
    }

    auto top = diversity_top_k(collapsed, params.k);

    std::vector<Explanation> out;
    out.reserve(top.size());
    for (auto& sp : top) {
        Explanation e;
        e.signature = signature;
        e.graph = jg;
        e.graph_edges = static_cast<int>(jg.edge_count());
        e.pattern = std::move(sp.pattern);
        e.primary = sp.target;
        if (two_point) e.secondary = sp.target == targets[0] ? targets[1] : targets[0];
        e.metrics = sp.metrics;
        e.v1 = e.metrics.tp;
        e.a1 = e.metrics.tp + e.metrics.fn;
        e.v2 = e.metrics.fp;
        if (e.secondary) {
            e.a2 = static_cast<std::int64_t>(f1_sample.kept_size_of_result[*e.secondary]);
        } else {
            std::int64_t total = 0;
            for (std::size_t res = 0; res < apt.n_results; ++res) {
                if (static_cast<int>(res) == e.primary) continue;
                total += static_cast<std::int64_t>(f1_sample.kept_size_of_result[res]);
            }
            e.a2 = total;
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<Explanation> explain(const Database& db, const SchemaGraph& schema, const Query& q,
                                 const ProvenanceTable& pt, const std::vector<int>& targets,
                                 const MiningParams& params, MiningTrace* trace) {
    params.validate();
    for (const int t : targets) {
        if (t < 0 || t >= static_cast<int>(pt.results.size())) {
            throw InputError("question tuple is not a result of the query");
        }
    }

    auto graphs = enumerate_join_graphs(schema, q, params.max_edges);
    std::vector<Explanation> all;
    for (const auto& jg : graphs) {
        const auto validity =
            is_valid(jg, db, q, schema, pt.rows.size(), params.cost_threshold);
        if (!validity.valid) continue;
        auto mined = mine_apt(db, q, pt, jg, schema, targets, params, trace);
        for (auto& e : mined) all.push_back(std::move(e));
    }

    std::unordered_set<std::string> seen;
    std::vector<Explanation> unique;
    for (auto& e : all) {
        const std::string key =
            e.signature + "\x1f" + e.pattern.canonical() + "\x1f" + std::to_string(e.primary);
        if (seen.insert(key).second) unique.push_back(std::move(e));
    }

    std::sort(unique.begin(), unique.end(), [](const Explanation& a, const Explanation& b) {
        if (a.metrics.fscore != b.metrics.fscore) return a.metrics.fscore > b.metrics.fscore;
        if (a.graph_edges != b.graph_edges) return a.graph_edges < b.graph_edges;
        const std::string ca = a.pattern.canonical();
        const std::string cb = b.pattern.canonical();
        if (ca != cb) return ca < cb;
        if (a.signature != b.signature) return a.signature < b.signature;
        return a.primary < b.primary;
    });
    return unique;
}

}  // namespace provex
