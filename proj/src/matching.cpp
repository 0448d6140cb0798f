#include "crossmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "crossmatch/error.hpp"

namespace crossmatch {

std::vector<std::size_t> Matching::mates(std::size_t size) const {
    std::vector<std::size_t> mate(size, size);
    for (const Edge& e : edges) {
        mate[e.u] = e.v;
        mate[e.v] = e.u;
    }
    return mate;
}

bool is_perfect_matching(const Matching& m, std::size_t size) {
    if (size % 2 != 0 || m.edges.size() != size / 2) return false;
    std::vector<char> used(size, 0);
    for (const Edge& e : m.edges) {
        if (e.u >= size || e.v >= size || e.u == e.v) return false;
        if (used[e.u] || used[e.v]) return false;
        used[e.u] = used[e.v] = 1;
    }
    return true;
}

double matching_weight(const Matching& m, const DistanceMatrix& d) {
    double total = 0.0;
    for (const Edge& e : m.edges) total += d(e.u, e.v);
    return total;
}

namespace {

Matching from_mates(const std::vector<int>& mate, const DistanceMatrix& d) {
    Matching m;
    for (std::size_t u = 0; u < mate.size(); ++u) {
        const auto v = static_cast<std::size_t>(mate[u]);
        if (u < v) m.edges.push_back({u, v});
    }
    std::sort(m.edges.begin(), m.edges.end());
    m.total_weight = matching_weight(m, d);
    return m;
}

// Edmonds' blossom algorithm in primal-dual form for minimum-cost perfect
// matching on a dense graph, O(n^3).
//
// Nodes 0..n-1 are vertices, n..2n-1 are blossom slots. dual_[v] for a
// vertex absorbs the duals of the blossoms that contain it, so the slack of
// an edge between different top-level nodes is cost - dual_[u] - dual_[v].
// dual_[b] for a blossom carries twice its odd-set dual; an inner blossom
// is expanded when it reaches zero.
//
// Costs are multiples of 4 and the initial duals are even, which keeps every
// delta integral: all labelled vertices share the parity of the roots, so
// outer-outer slacks are even.
class BlossomSolver {
public:
    explicit BlossomSolver(const DistanceMatrix& d)
        : n_(static_cast<int>(d.size())), ghost_(d.has_ghost() ? static_cast<int>(*d.ghost_index()) : kNone) {
        const double max_w = d.max_weight();
        const double scale = max_w > 0.0 ? std::ldexp(1.0, 40) / max_w : 0.0;
        const auto nn = static_cast<std::size_t>(n_);
        cost_.resize(nn * nn);
        for (std::size_t i = 0; i < nn * nn; ++i) {
            cost_[i] = 4 * static_cast<Cost>(std::llround(d.data()[i] * scale));
        }
        const std::size_t nodes = 2 * nn;
        dual_.assign(nodes, 0);
        mate_.assign(nodes, kNone);
        slack_.assign(nodes, kNone);
        top_.assign(nodes, kNone);
        parent_.assign(nodes, kNone);
        label_.assign(nodes, kUnlabeled);
        visit_.assign(nodes, 0);
        flower_.resize(nodes);
        best_.assign(nn * nodes, Arc{});
        flower_from_.assign(nn * nn, kNone);
        for (int v = 0; v < n_; ++v) top_[v] = v;
        used_ = n_;
    }

    std::vector<int> solve() {
        jump_start();
        while (augment_once()) {
        }
        std::vector<int> mate(mate_.begin(), mate_.begin() + n_);
        for (int v = 0; v < n_; ++v) {
            if (mate[v] == kNone) throw NumericError("matching solver left vertex " + std::to_string(v) + " unmatched");
        }
        return mate;
    }

private:
    using Cost = std::int64_t;
    static constexpr int kNone = -1;
    static constexpr int kUnlabeled = -1;
    static constexpr int kOuter = 0;
    static constexpr int kInner = 1;

    // Real endpoints of the best edge between two nodes; u lies on the first node's side.
    struct Arc {
        int u = kNone;
        int v = kNone;
    };

    int n_;
    int ghost_;  // zero-cost vertex, kNone when absent
    int used_;  // one past the highest node index ever used
    std::vector<Cost> cost_;
    std::vector<Cost> dual_;
    std::vector<int> mate_;   // real vertex matched to the node, or kNone
    std::vector<int> slack_;  // outer vertex with the least-slack edge into the node
    std::vector<int> top_;    // outermost blossom containing the node, kNone for free slots
    std::vector<int> parent_; // vertex through which an inner node was reached
    std::vector<int> label_;
    std::vector<int> visit_;
    int stamp_ = 0;
    std::vector<std::vector<int>> flower_;
    std::vector<Arc> best_;        // [(b - n) * 2n + x] for blossom b
    std::vector<int> flower_from_; // [(b - n) * n + v]: child of b holding vertex v
    std::vector<int> queue_;
    std::size_t head_ = 0;

    bool is_blossom(int x) const { return x >= n_; }
    Cost cost(int u, int v) const { return cost_[static_cast<std::size_t>(u) * n_ + v]; }
    Cost reduced(const Arc& a) const { return cost(a.u, a.v) - dual_[a.u] - dual_[a.v]; }

    Arc& best_ref(int b, int x) { return best_[static_cast<std::size_t>(b - n_) * 2 * n_ + x]; }
    int& from_ref(int b, int v) { return flower_from_[static_cast<std::size_t>(b - n_) * n_ + v]; }

    Arc arc(int x, int y) {
        if (!is_blossom(x)) {
            if (!is_blossom(y)) return {x, y};
            const Arc a = best_ref(y, x);
            return {a.v, a.u};
        }
        return best_ref(x, y);
    }

    void set_arc(int x, int y, Arc a) {
        if (is_blossom(x)) best_ref(x, y) = a;
        if (is_blossom(y)) best_ref(y, x) = {a.v, a.u};
    }

    int flower_from(int b, int v) { return is_blossom(b) ? from_ref(b, v) : (b == v ? v : kNone); }

    void jump_start() {
        // The ghost's zero edges would pin every other dual at 0, so real
        // vertices look only at real partners and the ghost takes -max.
        Cost top = 0;
        for (int u = 0; u < n_; ++u) {
            if (u == ghost_) continue;
            Cost lo = std::numeric_limits<Cost>::max();
            for (int v = 0; v < n_; ++v) {
                if (v != u && v != ghost_) lo = std::min(lo, cost(u, v));
            }
            dual_[u] = lo == std::numeric_limits<Cost>::max() ? 0 : lo / 2;
            top = std::max(top, dual_[u]);
        }
        if (ghost_ != kNone) dual_[ghost_] = -top;
        for (int u = 0; u < n_; ++u) {
            if (mate_[u] != kNone) continue;
            int pick = kNone;
            Cost lo = std::numeric_limits<Cost>::max();
            for (int v = 0; v < n_; ++v) {
                if (v == u) continue;
                const Cost s = cost(u, v) - dual_[u] - dual_[v];
                if (s < lo || (s == lo && mate_[v] == kNone && mate_[pick] != kNone)) {  // prefer free partners
                    lo = s;
                    pick = v;
                }
            }
            dual_[u] += lo;
            if (mate_[pick] == kNone) {
                mate_[u] = pick;
                mate_[pick] = u;
            }
        }
    }

    void update_slack(int u, int x) {
        if (slack_[x] == kNone || reduced(arc(u, x)) < reduced(arc(slack_[x], x))) slack_[x] = u;
    }

    void set_slack(int x) {
        slack_[x] = kNone;
        for (int u = 0; u < n_; ++u) {
            if (top_[u] != x && label_[top_[u]] == kOuter) update_slack(u, x);
        }
    }

    void push(int x) {
        if (!is_blossom(x)) {
            queue_.push_back(x);
        } else {
            for (int child : flower_[x]) push(child);
        }
    }

    void set_top(int x, int b) {
        top_[x] = b;
        if (is_blossom(x)) {
            for (int child : flower_[x]) set_top(child, b);
        }
    }

    // Rotates the cycle so that xr's position is even; returns that position.
    int even_position(int b, int xr) {
        auto& f = flower_[b];
        const int pos = static_cast<int>(std::find(f.begin(), f.end(), xr) - f.begin());
        if (pos % 2 == 1) {
            std::reverse(f.begin() + 1, f.end());
            return static_cast<int>(f.size()) - pos;
        }
        return pos;
    }

    void set_match(int u, int v) {
        const Arc e = arc(u, v);
        mate_[u] = e.v;
        if (is_blossom(u)) {
            const int xr = flower_from(u, e.u);
            const int pr = even_position(u, xr);
            for (int i = 0; i < pr; ++i) set_match(flower_[u][i], flower_[u][i ^ 1]);
            set_match(xr, v);
            std::rotate(flower_[u].begin(), flower_[u].begin() + pr, flower_[u].end());
        }
    }

    void augment(int u, int v) {
        for (;;) {
            const int xnv = mate_[u] == kNone ? kNone : top_[mate_[u]];
            set_match(u, v);
            if (xnv == kNone) return;
            set_match(xnv, top_[parent_[xnv]]);
            u = top_[parent_[xnv]];
            v = xnv;
        }
    }

    int lowest_common_ancestor(int u, int v) {
        for (++stamp_; u != kNone || v != kNone; std::swap(u, v)) {
            if (u == kNone) continue;
            if (visit_[u] == stamp_) return u;
            visit_[u] = stamp_;
            u = mate_[u] == kNone ? kNone : top_[mate_[u]];
            if (u != kNone) u = top_[parent_[u]];
        }
        return kNone;
    }

    void add_blossom(int u, int lca, int v) {
        int b = n_;
        while (b < used_ && top_[b] != kNone) ++b;
        if (b == used_) ++used_;
        dual_[b] = 0;
        label_[b] = kOuter;
        mate_[b] = mate_[lca];
        auto& f = flower_[b];
        f.clear();
        f.push_back(lca);
        for (int x = u, y; x != lca; x = top_[parent_[y]]) {
            f.push_back(x);
            f.push_back(y = top_[mate_[x]]);
            push(y);
        }
        std::reverse(f.begin() + 1, f.end());
        for (int x = v, y; x != lca; x = top_[parent_[y]]) {
            f.push_back(x);
            f.push_back(y = top_[mate_[x]]);
            push(y);
        }
        set_top(b, b);
        for (int x = 0; x < used_; ++x) set_arc(b, x, Arc{});
        for (int x = 0; x < n_; ++x) from_ref(b, x) = kNone;
        for (int xs : f) {
            for (int x = 0; x < used_; ++x) {
                if (top_[x] == b) continue;
                const Arc cand = arc(xs, x);
                if (cand.u == kNone) continue;
                const Arc cur = arc(b, x);
                if (cur.u == kNone || reduced(cand) < reduced(cur)) set_arc(b, x, cand);
            }
            if (is_blossom(xs)) {
                for (int x = 0; x < n_; ++x) {
                    if (from_ref(xs, x) != kNone) from_ref(b, x) = xs;
                }
            } else {
                from_ref(b, xs) = xs;
            }
        }
        set_slack(b);
    }

    void expand_blossom(int b) {
        auto& f = flower_[b];
        for (int child : f) set_top(child, child);
        const int xr = flower_from(b, arc(b, parent_[b]).u);
        const int pr = even_position(b, xr);
        for (int i = 0; i < pr; i += 2) {
            const int xs = f[i];
            const int xns = f[i + 1];
            parent_[xs] = arc(xns, xs).u;
            label_[xs] = kInner;
            label_[xns] = kOuter;
            slack_[xs] = kNone;
            set_slack(xns);
            push(xns);
        }
        label_[xr] = kInner;
        parent_[xr] = parent_[b];
        for (std::size_t i = static_cast<std::size_t>(pr) + 1; i < f.size(); ++i) {
            label_[f[i]] = kUnlabeled;
            set_slack(f[i]);
        }
        top_[b] = kNone;
    }

    bool on_tight_edge(const Arc& e) {
        const int u = top_[e.u];
        const int v = top_[e.v];
        if (label_[v] == kUnlabeled) {
            parent_[v] = e.u;
            label_[v] = kInner;
            const int nu = top_[mate_[v]];
            slack_[v] = slack_[nu] = kNone;
            label_[nu] = kOuter;
            push(nu);
        } else if (label_[v] == kOuter) {
            const int lca = lowest_common_ancestor(u, v);
            if (lca == kNone) {
                augment(u, v);
                augment(v, u);
                return true;
            }
            add_blossom(u, lca, v);
        }
        return false;
    }

    // One search phase from all free nodes; returns false once the matching is perfect.
    bool augment_once() {
        std::fill(label_.begin(), label_.begin() + used_, kUnlabeled);
        std::fill(slack_.begin(), slack_.begin() + used_, kNone);
        queue_.clear();
        head_ = 0;
        for (int x = 0; x < used_; ++x) {
            if (top_[x] == x && mate_[x] == kNone) {
                parent_[x] = kNone;
                label_[x] = kOuter;
                push(x);
            }
        }
        if (queue_.empty()) return false;
        for (;;) {
            while (head_ < queue_.size()) {
                const int u = queue_[head_++];
                if (label_[top_[u]] == kInner) continue;
                const Cost* row = cost_.data() + static_cast<std::size_t>(u) * n_;
                const Cost du = dual_[u];
                for (int v = 0; v < n_; ++v) {
                    if (top_[u] == top_[v]) continue;
                    if (row[v] - du - dual_[v] == 0) {
                        if (on_tight_edge({u, v})) return true;
                    } else {
                        update_slack(u, top_[v]);
                    }
                }
            }
            Cost delta = std::numeric_limits<Cost>::max();
            for (int b = n_; b < used_; ++b) {
                if (top_[b] == b && label_[b] == kInner) delta = std::min(delta, dual_[b] / 2);
            }
            for (int x = 0; x < used_; ++x) {
                if (top_[x] != x || slack_[x] == kNone) continue;
                if (label_[x] == kUnlabeled) {
                    delta = std::min(delta, reduced(arc(slack_[x], x)));
                } else if (label_[x] == kOuter) {
                    delta = std::min(delta, reduced(arc(slack_[x], x)) / 2);
                }
            }
            if (delta == std::numeric_limits<Cost>::max()) {
                throw NumericError("graph admits no perfect matching");
            }
            for (int u = 0; u < n_; ++u) {
                const int l = label_[top_[u]];
                if (l == kOuter) {
                    dual_[u] += delta;
                } else if (l == kInner) {
                    dual_[u] -= delta;
                }
            }
            for (int b = n_; b < used_; ++b) {
                if (top_[b] != b) continue;
                if (label_[b] == kOuter) {
                    dual_[b] += 2 * delta;
                } else if (label_[b] == kInner) {
                    dual_[b] -= 2 * delta;
                }
            }
            queue_.clear();
            head_ = 0;
            for (int x = 0; x < used_; ++x) {
                if (top_[x] == x && slack_[x] != kNone && top_[slack_[x]] != x && reduced(arc(slack_[x], x)) == 0) {
                    if (on_tight_edge(arc(slack_[x], x))) return true;
                }
            }
            for (int b = n_; b < used_; ++b) {
                if (top_[b] == b && label_[b] == kInner && dual_[b] == 0) expand_blossom(b);
            }
        }
    }
};

void check_even(const DistanceMatrix& d) {
    if (d.size() < 2) throw std::invalid_argument("perfect matching needs at least 2 vertices");
    if (d.size() % 2 != 0) {
        throw std::invalid_argument("perfect matching needs an even vertex count (got " + std::to_string(d.size()) +
                                    "); add a ghost point first");
    }
}

void enumerate(const DistanceMatrix& d, std::vector<int>& mate, double partial, double& best,
               std::vector<int>& best_mate) {
    const int n = static_cast<int>(mate.size());
    int first = 0;
    while (first < n && mate[first] != -1) ++first;
    if (first == n) {
        if (partial < best) {
            best = partial;
            best_mate = mate;
        }
        return;
    }
    for (int j = first + 1; j < n; ++j) {
        if (mate[j] != -1) continue;
        mate[first] = j;
        mate[j] = first;
        enumerate(d, mate, partial + d(static_cast<std::size_t>(first), static_cast<std::size_t>(j)), best, best_mate);
        mate[first] = mate[j] = -1;
    }
}

}  // namespace

Matching min_weight_perfect_matching(const DistanceMatrix& d) {
    check_even(d);
    BlossomSolver solver(d);
    return from_mates(solver.solve(), d);
}

Matching brute_force_matching(const DistanceMatrix& d) {
    check_even(d);
    if (d.size() > 14) throw std::invalid_argument("brute-force matching is limited to 14 vertices");
    std::vector<int> mate(d.size(), -1);
    std::vector<int> best_mate;
    double best = std::numeric_limits<double>::infinity();
    // Partners are tried in increasing order and only strict improvements are
    // kept, so the first optimum found is the lexicographically smallest.
    enumerate(d, mate, 0.0, best, best_mate);
    return from_mates(best_mate, d);
}

}  // namespace crossmatch
