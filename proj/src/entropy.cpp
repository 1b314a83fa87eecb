#include "mrse/entropy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mrse {

double shannon_bits(std::span<const double> p) {
    double total = 0.0;
    for (double v : p)
        if (v > 0.0)
            total -= v * std::log2(v);
    return total;
}

double decoded_fraction(double one_d, double min_two_d) {
    if (!(one_d > 0.0))
        throw std::invalid_argument("1D entropy must be positive");
    return (one_d - min_two_d) / one_d;
}

// ---------------------------------------------------------------------------
// Flow graphs

FlowGraph make_flow_graph(const TransitionMatrix &t, const StationaryDistribution &x) {
    if (x.values.size() != t.size())
        throw std::invalid_argument("dimension mismatch");
    FlowGraph fg;
    fg.node_count = t.size();
    fg.teleport = t.teleport();
    fg.occupancy = x.values;
    fg.dangling_mass.assign(fg.node_count, 0.0);
    for (NodeIndex src = 0; src < fg.node_count; ++src) {
        if (t.dangling(src)) {
            fg.dangling_mass[src] = x.values[src];
            continue;
        }
        for (const ColEntry &e : t.column(src))
            fg.arcs.push_back({src, e.dst, e.prob * x.values[src]});
    }
    return fg;
}

FlowGraph make_flow_graph(const MultiRelTransition &t, const MultiRankResult &mr) {
    if (mr.node_dist.size() != t.node_count() || mr.relation_dist.size() != t.relation_count())
        throw std::invalid_argument("dimension mismatch");
    FlowGraph fg;
    fg.node_count = t.node_count();
    fg.teleport = t.teleport();
    fg.occupancy = mr.node_dist;
    fg.dangling_mass.assign(fg.node_count, 0.0);
    std::map<std::pair<NodeIndex, NodeIndex>, double> flow;
    for (RelIndex rel = 0; rel < t.relation_count(); ++rel) {
        const double y = mr.relation_dist[rel];
        for (NodeIndex src = 0; src < fg.node_count; ++src) {
            if (t.dangling(rel, src)) {
                fg.dangling_mass[src] += y * mr.node_dist[src];
                continue;
            }
            for (const ColEntry &e : t.column(rel, src))
                flow[{src, e.dst}] += y * e.prob * mr.node_dist[src];
        }
    }
    fg.arcs.reserve(flow.size());
    for (const auto &[key, f] : flow)
        fg.arcs.push_back({key.first, key.second, f});
    return fg;
}

std::vector<double> leaf_entering(const FlowGraph &fg) {
    const std::size_t n = fg.node_count;
    const double c = fg.teleport;
    std::vector<double> in(n, 0.0);
    for (const FlowArc &a : fg.arcs)
        if (a.src != a.dst)
            in[a.dst] += a.flow;
    const double dang_total = std::accumulate(fg.dangling_mass.begin(), fg.dangling_mass.end(), 0.0);
    for (std::size_t v = 0; v < n; ++v)
        in[v] = c * in[v] + (c * (dang_total - fg.dangling_mass[v]) + (1.0 - c) * (1.0 - fg.occupancy[v])) /
                                static_cast<double>(n);
    return in;
}

double flow_entropy(const FlowGraph &fg, const EncodingTree &t) {
    if (t.leaf_count() != fg.node_count)
        throw std::invalid_argument("tree does not span the chain's node set");
    const std::size_t n = fg.node_count;
    const auto leaf_in = leaf_entering(fg);

    if (t.height() == 1) {
        double value = 0.0;
        for (std::size_t v = 0; v < n; ++v)
            if (leaf_in[v] > 0.0)
                value -= leaf_in[v] * std::log2(fg.occupancy[v]);
        return value;
    }
    if (t.height() != 2)
        throw std::invalid_argument("flow entropy supports trees of height 1 or 2");

    const auto refs = t.height1_refs();
    std::unordered_map<EncodingTree::Ref, std::size_t> index;
    index.reserve(refs.size());
    for (std::size_t i = 0; i < refs.size(); ++i)
        index.emplace(refs[i], i);

    std::vector<std::size_t> cluster_of(n);
    std::vector<double> occ(refs.size(), 0.0);
    std::vector<double> dang(refs.size(), 0.0);
    std::vector<double> in_sum(refs.size(), 0.0);
    std::vector<std::size_t> size(refs.size(), 0);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t k = index.at(t.cluster_of(static_cast<NodeIndex>(v)));
        cluster_of[v] = k;
        occ[k] += fg.occupancy[v];
        dang[k] += fg.dangling_mass[v];
        ++size[k];
    }
    for (const FlowArc &a : fg.arcs)
        if (cluster_of[a.src] != cluster_of[a.dst])
            in_sum[cluster_of[a.dst]] += a.flow;

    const double c = fg.teleport;
    const double dang_total = std::accumulate(fg.dangling_mass.begin(), fg.dangling_mass.end(), 0.0);
    double value = 0.0;
    for (std::size_t k = 0; k < refs.size(); ++k) {
        const double enter = c * in_sum[k] + (c * (dang_total - dang[k]) + (1.0 - c) * (1.0 - occ[k])) *
                                                 static_cast<double>(size[k]) / static_cast<double>(n);
        if (enter > 0.0)
            value -= enter * std::log2(occ[k]); // parent is the root, occupancy 1
    }
    for (std::size_t v = 0; v < n; ++v)
        if (leaf_in[v] > 0.0)
            value -= leaf_in[v] * (std::log2(fg.occupancy[v]) - std::log2(occ[cluster_of[v]]));
    return value;
}

// ---------------------------------------------------------------------------
// Degree-route structural entropy

double se(const SingleRelationalGraph &g, const EncodingTree &t) {
    if (g.node_count() == 0)
        throw std::invalid_argument("empty graph");
    if (t.leaf_count() != g.node_count())
        throw std::invalid_argument("tree does not span the graph");
    const std::size_t n = g.node_count();
    const auto in_deg = g.in_degrees();
    const double vol_total = std::accumulate(in_deg.begin(), in_deg.end(), 0.0);
    if (!(vol_total > 0.0))
        throw std::invalid_argument("graph volume is zero");
    std::vector<double> self_w(n, 0.0);
    for (const auto &a : g.arcs())
        if (a.src == a.dst)
            self_w[a.src] += a.weight;

    if (t.height() == 1) {
        double value = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
            const double cut = in_deg[v] - self_w[v];
            if (cut > 0.0)
                value -= (cut / vol_total) * std::log2(in_deg[v] / vol_total);
        }
        return value;
    }
    if (t.height() != 2)
        throw std::invalid_argument("se supports trees of height 1 or 2");

    const auto refs = t.height1_refs();
    std::unordered_map<EncodingTree::Ref, std::size_t> index;
    for (std::size_t i = 0; i < refs.size(); ++i)
        index.emplace(refs[i], i);
    std::vector<std::size_t> cluster_of(n);
    std::vector<double> vol(refs.size(), 0.0);
    std::vector<double> cut(refs.size(), 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t k = index.at(t.cluster_of(static_cast<NodeIndex>(v)));
        cluster_of[v] = k;
        vol[k] += in_deg[v];
    }
    for (const auto &a : g.arcs())
        if (cluster_of[a.src] != cluster_of[a.dst])
            cut[cluster_of[a.dst]] += a.weight;

    double value = 0.0;
    for (std::size_t k = 0; k < refs.size(); ++k)
        if (cut[k] > 0.0)
            value -= (cut[k] / vol_total) * std::log2(vol[k] / vol_total);
    for (std::size_t v = 0; v < n; ++v) {
        const double leaf_cut = in_deg[v] - self_w[v];
        if (leaf_cut > 0.0)
            value -= (leaf_cut / vol_total) * (std::log2(in_deg[v]) - std::log2(vol[cluster_of[v]]));
    }
    return value;
}

// ---------------------------------------------------------------------------
// Surfing entropies

double rsse(const SingleRelationalGraph &g, const EncodingTree &t, const StationaryDistribution &x,
            const TransitionMatrix &tm) {
    if (tm.size() != g.node_count() || x.values.size() != g.node_count())
        throw std::invalid_argument("chain was not built from this graph");
    return flow_entropy(make_flow_graph(tm, x), t);
}

double rsse_1d(const StationaryDistribution &x) {
    return shannon_bits(x.values);
}

double mrse(const MultiRelationalGraph &g, const EncodingTree &t, const MultiRankResult &mr,
            const MultiRelTransition &mt) {
    if (mt.node_count() != g.node_count() || mt.relation_count() != g.relation_count() ||
        mr.node_dist.size() != g.node_count())
        throw std::invalid_argument("chain was not built from this graph");
    return flow_entropy(make_flow_graph(mt, mr), t);
}

double mrse_1d(const MultiRankResult &mr) {
    return shannon_bits(mr.node_dist);
}

// ---------------------------------------------------------------------------
// EntropyTerms

EntropyTerms::EntropyTerms(const FlowGraph &fg, const EncodingTree &t) {
    if (t.height() != 2)
        throw std::invalid_argument("merge state requires a height-2 tree");
    if (t.leaf_count() != fg.node_count)
        throw std::invalid_argument("tree does not span the chain's node set");
    n_ = fg.node_count;
    teleport_ = fg.teleport;
    dang_total_ = std::accumulate(fg.dangling_mass.begin(), fg.dangling_mass.end(), 0.0);
    leaf_in_ = leaf_entering(fg);
    initial_entropy_ = flow_entropy(fg, t);

    for (Ref r : t.height1_refs())
        clusters_.emplace(r, Cluster{});
    std::vector<Ref> cluster_of(n_);
    for (std::size_t v = 0; v < n_; ++v) {
        const Ref r = t.cluster_of(static_cast<NodeIndex>(v));
        cluster_of[v] = r;
        Cluster &c = clusters_.at(r);
        c.occ += fg.occupancy[v];
        c.dang += fg.dangling_mass[v];
        c.child_sum += leaf_in_[v];
        ++c.size;
    }
    for (const FlowArc &a : fg.arcs) {
        const Ref ca = cluster_of[a.src];
        const Ref cb = cluster_of[a.dst];
        if (ca == cb)
            continue;
        clusters_.at(ca).out[cb] += a.flow;
        clusters_.at(cb).in[ca] += a.flow;
        clusters_.at(cb).in_sum += a.flow;
    }
}

const EntropyTerms::Cluster &EntropyTerms::cluster(Ref r) const {
    auto it = clusters_.find(r);
    if (it == clusters_.end())
        throw std::invalid_argument("unknown cluster handle " + std::to_string(r));
    return it->second;
}

double EntropyTerms::entering_of(const Cluster &c) const {
    return teleport_ * c.in_sum +
           (teleport_ * (dang_total_ - c.dang) + (1.0 - teleport_) * (1.0 - c.occ)) *
               static_cast<double>(c.size) / static_cast<double>(n_);
}

double EntropyTerms::occupancy(Ref r) const {
    return cluster(r).occ;
}

double EntropyTerms::entering(Ref r) const {
    return entering_of(cluster(r));
}

double EntropyTerms::child_entering_sum(Ref r) const {
    return cluster(r).child_sum;
}

double EntropyTerms::cross_flow(Ref a, Ref b) const {
    const Cluster &ca = cluster(a);
    (void)cluster(b);
    auto it = ca.out.find(b);
    return it == ca.out.end() ? 0.0 : it->second;
}

double EntropyTerms::merged_entering(Ref a, Ref b) const {
    const Cluster &ca = cluster(a);
    const Cluster &cb = cluster(b);
    const double in_sum = ca.in_sum + cb.in_sum - cross_flow(a, b) - cross_flow(b, a);
    const double occ = ca.occ + cb.occ;
    const double dang = ca.dang + cb.dang;
    const auto size = static_cast<double>(ca.size + cb.size);
    return teleport_ * in_sum +
           (teleport_ * (dang_total_ - dang) + (1.0 - teleport_) * (1.0 - occ)) * size /
               static_cast<double>(n_);
}

void EntropyTerms::apply_merge(Ref a, Ref b, Ref merged) {
    if (a == b)
        throw std::invalid_argument("cannot merge a cluster with itself");
    if (clusters_.count(merged))
        throw std::invalid_argument("merged handle already in use");
    Cluster m;
    {
        const Cluster &ca = cluster(a);
        const Cluster &cb = cluster(b);
        m.occ = ca.occ + cb.occ;
        m.dang = ca.dang + cb.dang;
        m.child_sum = ca.child_sum + cb.child_sum;
        m.size = ca.size + cb.size;
        m.in_sum = ca.in_sum + cb.in_sum - cross_flow(a, b) - cross_flow(b, a);
        for (const Cluster *part : {&ca, &cb}) {
            for (const auto &[other, w] : part->out)
                if (other != a && other != b)
                    m.out[other] += w;
            for (const auto &[other, w] : part->in)
                if (other != a && other != b)
                    m.in[other] += w;
        }
    }
    clusters_.erase(a);
    clusters_.erase(b);
    for (const auto &[other, w] : m.out) {
        Cluster &o = clusters_.at(other);
        o.in.erase(a);
        o.in.erase(b);
        o.in[merged] = w;
    }
    for (const auto &[other, w] : m.in) {
        Cluster &o = clusters_.at(other);
        o.out.erase(a);
        o.out.erase(b);
        o.out[merged] = w;
    }
    clusters_.emplace(merged, std::move(m));
}

double delta_mrse_exact(const EntropyTerms &terms, EncodingTree::Ref a, EncodingTree::Ref b) {
    if (a == b)
        throw std::invalid_argument("merge delta needs two distinct clusters");
    const double pa = terms.occupancy(a);
    const double pb = terms.occupancy(b);
    const double pn = pa + pb;
    const double in_a = terms.entering(a);
    const double in_b = terms.entering(b);
    const double in_n = terms.merged_entering(a, b);
    const double sa = terms.child_entering_sum(a);
    const double sb = terms.child_entering_sum(b);

    double d = 0.0;
    if (in_n > 0.0)
        d -= in_n * std::log2(pn);
    if (in_a > 0.0)
        d += in_a * std::log2(pa);
    if (in_b > 0.0)
        d += in_b * std::log2(pb);
    if (sa > 0.0)
        d += sa * (std::log2(pn) - std::log2(pa));
    if (sb > 0.0)
        d += sb * (std::log2(pn) - std::log2(pb));
    return d;
}

double delta_mrse_paper(const EntropyTerms &terms, EncodingTree::Ref a, EncodingTree::Ref b) {
    if (a == b)
        throw std::invalid_argument("merge delta needs two distinct clusters");
    const double pa = terms.occupancy(a);
    const double pb = terms.occupancy(b);
    const double pn = pa + pb;
    const double in_a = terms.entering(a);
    const double in_b = terms.entering(b);
    const double in_n = terms.merged_entering(a, b);

    double d = 0.0;
    if (in_n > 0.0)
        d -= in_n * std::log2(pn);
    if (pa > 0.0)
        d -= pa * (std::log2(pa) - std::log2(pn));
    if (pb > 0.0)
        d -= pb * (std::log2(pb) - std::log2(pn));
    if (in_a > 0.0)
        d += in_a * std::log2(pa);
    if (in_b > 0.0)
        d += in_b * std::log2(pb);
    return d;
}

// ---------------------------------------------------------------------------
// DegreeStats

DegreeStats::DegreeStats(const SingleRelationalGraph &g, const EncodingTree &t) {
    if (t.height() != 2)
        throw std::invalid_argument("merge state requires a height-2 tree");
    if (t.leaf_count() != g.node_count())
        throw std::invalid_argument("tree does not span the graph");
    const std::size_t n = g.node_count();
    const auto in_deg = g.in_degrees();
    total_volume_ = std::accumulate(in_deg.begin(), in_deg.end(), 0.0);
    // an edgeless (sub)graph carries no walk and no structural information
    initial_entropy_ = total_volume_ > 0.0 ? se(g, t) : 0.0;

    std::vector<double> self_w(n, 0.0);
    for (const auto &a : g.arcs())
        if (a.src == a.dst)
            self_w[a.src] += a.weight;

    for (Ref r : t.height1_refs())
        clusters_.emplace(r, Cluster{});
    std::vector<Ref> cluster_of(n);
    for (std::size_t v = 0; v < n; ++v) {
        const Ref r = t.cluster_of(static_cast<NodeIndex>(v));
        cluster_of[v] = r;
        Cluster &c = clusters_.at(r);
        c.vol += in_deg[v];
        c.child_sum += in_deg[v] - self_w[v];
    }
    for (const auto &a : g.arcs()) {
        const Ref ca = cluster_of[a.src];
        const Ref cb = cluster_of[a.dst];
        if (ca == cb)
            continue;
        clusters_.at(ca).out[cb] += a.weight;
        clusters_.at(cb).in[ca] += a.weight;
        clusters_.at(cb).cut += a.weight;
    }
}

const DegreeStats::Cluster &DegreeStats::cluster(Ref r) const {
    auto it = clusters_.find(r);
    if (it == clusters_.end())
        throw std::invalid_argument("unknown cluster handle " + std::to_string(r));
    return it->second;
}

double DegreeStats::volume(Ref r) const {
    return cluster(r).vol;
}

double DegreeStats::cut(Ref r) const {
    return cluster(r).cut;
}

double DegreeStats::child_cut_sum(Ref r) const {
    return cluster(r).child_sum;
}

double DegreeStats::cross_cut(Ref a, Ref b) const {
    const Cluster &ca = cluster(a);
    (void)cluster(b);
    auto it = ca.out.find(b);
    return it == ca.out.end() ? 0.0 : it->second;
}

double DegreeStats::merged_cut(Ref a, Ref b) const {
    return cluster(a).cut + cluster(b).cut - cross_cut(a, b) - cross_cut(b, a);
}

void DegreeStats::apply_merge(Ref a, Ref b, Ref merged) {
    if (a == b)
        throw std::invalid_argument("cannot merge a cluster with itself");
    if (clusters_.count(merged))
        throw std::invalid_argument("merged handle already in use");
    Cluster m;
    {
        const Cluster &ca = cluster(a);
        const Cluster &cb = cluster(b);
        m.vol = ca.vol + cb.vol;
        m.child_sum = ca.child_sum + cb.child_sum;
        m.cut = merged_cut(a, b);
        for (const Cluster *part : {&ca, &cb}) {
            for (const auto &[other, w] : part->out)
                if (other != a && other != b)
                    m.out[other] += w;
            for (const auto &[other, w] : part->in)
                if (other != a && other != b)
                    m.in[other] += w;
        }
    }
    clusters_.erase(a);
    clusters_.erase(b);
    for (const auto &[other, w] : m.out) {
        Cluster &o = clusters_.at(other);
        o.in.erase(a);
        o.in.erase(b);
        o.in[merged] = w;
    }
    for (const auto &[other, w] : m.in) {
        Cluster &o = clusters_.at(other);
        o.out.erase(a);
        o.out.erase(b);
        o.out[merged] = w;
    }
    clusters_.emplace(merged, std::move(m));
}

double delta_se(const DegreeStats &stats, EncodingTree::Ref a, EncodingTree::Ref b) {
    if (a == b)
        throw std::invalid_argument("merge delta needs two distinct clusters");
    const double vol_t = stats.total_volume();
    if (!(vol_t > 0.0))
        return 0.0;
    const double va = stats.volume(a);
    const double vb = stats.volume(b);
    const double vn = va + vb;
    const double cut_a = stats.cut(a);
    const double cut_b = stats.cut(b);
    const double cut_n = stats.merged_cut(a, b);
    const double sa = stats.child_cut_sum(a);
    const double sb = stats.child_cut_sum(b);

    double d = 0.0;
    if (cut_n > 0.0)
        d -= (cut_n / vol_t) * std::log2(vn / vol_t);
    if (cut_a > 0.0)
        d += (cut_a / vol_t) * std::log2(va / vol_t);
    if (cut_b > 0.0)
        d += (cut_b / vol_t) * std::log2(vb / vol_t);
    if (sa > 0.0)
        d += (sa / vol_t) * (std::log2(vn) - std::log2(va));
    if (sb > 0.0)
        d += (sb / vol_t) * (std::log2(vn) - std::log2(vb));
    return d;
}

} // namespace mrse
