// Copyright 2026 The eml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eml/detail/weighted_matching.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

// Primal-dual blossom algorithm for maximum-weight matching on general
// graphs, following Galil's exposition ("Efficient algorithms for finding
// maximum matching in graphs", ACM Computing Surveys, 1986) and the widely
// used Van Rantwijk reference implementation. O(V^3) with integer duals;
// duals and slacks carry a factor of two so all updates stay integral.

namespace eml::detail {

namespace {

struct Matching {
    int nvertex;
    int nedge;
    bool maxcardinality;
    std::vector<std::array<int64_t, 3>> edges; // (i, j, 2 * weight)

    // endpoint[p]: the vertex at endpoint p; edge k has endpoints 2k, 2k+1.
    std::vector<int> endpoint;
    // neighbend[v]: remote endpoints of edges incident to v.
    std::vector<std::vector<int>> neighbend;
    // mate[v]: remote endpoint of v's matched edge, or -1.
    std::vector<int> mate;
    // label[b] for vertex or top-level blossom b: 0 free, 1 S, 2 T;
    // bit 4 is a breadcrumb used while tracing back in scan_blossom.
    std::vector<int> label;
    // labelend[b]: endpoint through which b got its label, or -1.
    std::vector<int> labelend;
    // inblossom[v]: top-level blossom containing vertex v.
    std::vector<int> inblossom;
    std::vector<int> blossomparent;
    std::vector<std::vector<int>> blossomchilds;
    std::vector<int> blossombase;
    // blossomendps[b][i]: endpoint on the edge from child i to child i+1.
    std::vector<std::vector<int>> blossomendps;
    // bestedge[b]: least-slack edge from b to a different S-blossom, or -1.
    std::vector<int> bestedge;
    std::vector<std::vector<int>> blossombestedges;
    std::vector<int> unusedblossoms;
    // dualvar: vertex duals (first nvertex) then blossom duals.
    std::vector<int64_t> dualvar;
    std::vector<char> allowedge;
    std::vector<int> queue;

    Matching(int n, const std::vector<std::array<int64_t, 3>>& input, bool maxcard)
        : nvertex(n), nedge(int(input.size())), maxcardinality(maxcard), edges(input) {
        int64_t maxweight = 0;
        for (auto& e : edges) {
            assert(e[0] >= 0 && e[0] < n && e[1] >= 0 && e[1] < n && e[0] != e[1]);
            e[2] *= 2;
            maxweight = std::max(maxweight, e[2]);
        }
        endpoint.resize(2 * nedge);
        neighbend.resize(nvertex);
        for (int k = 0; k < nedge; ++k) {
            endpoint[2 * k] = int(edges[k][0]);
            endpoint[2 * k + 1] = int(edges[k][1]);
            neighbend[edges[k][0]].push_back(2 * k + 1);
            neighbend[edges[k][1]].push_back(2 * k);
        }
        mate.assign(nvertex, -1);
        label.assign(2 * nvertex, 0);
        labelend.assign(2 * nvertex, -1);
        inblossom.resize(nvertex);
        for (int v = 0; v < nvertex; ++v)
            inblossom[v] = v;
        blossomparent.assign(2 * nvertex, -1);
        blossomchilds.assign(2 * nvertex, {});
        blossombase.assign(2 * nvertex, -1);
        for (int v = 0; v < nvertex; ++v)
            blossombase[v] = v;
        blossomendps.assign(2 * nvertex, {});
        bestedge.assign(2 * nvertex, -1);
        blossombestedges.assign(2 * nvertex, {});
        for (int b = nvertex; b < 2 * nvertex; ++b)
            unusedblossoms.push_back(b);
        dualvar.assign(2 * nvertex, 0);
        for (int v = 0; v < nvertex; ++v)
            dualvar[v] = maxweight;
        allowedge.assign(nedge, 0);
    }

    int64_t slack(int k) const {
        return dualvar[edges[k][0]] + dualvar[edges[k][1]] - edges[k][2];
    }

    void blossom_leaves(int b, std::vector<int>& out) const {
        if (b < nvertex) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds[b])
            blossom_leaves(t, out);
    }

    void assign_label(int w, int t, int p) {
        int b = inblossom[w];
        assert(label[w] == 0 && label[b] == 0);
        label[w] = label[b] = t;
        labelend[w] = labelend[b] = p;
        bestedge[w] = bestedge[b] = -1;
        if (t == 1) {
            std::vector<int> leaves;
            blossom_leaves(b, leaves);
            queue.insert(queue.end(), leaves.begin(), leaves.end());
        } else if (t == 2) {
            int base = blossombase[b];
            assert(mate[base] >= 0);
            assign_label(endpoint[mate[base]], 1, mate[base] ^ 1);
        }
    }

    // Trace back from both ends of a tight S-S edge; returns the base vertex
    // of the new blossom, or -1 if the paths hit two distinct roots (an
    // augmenting path).
    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom[v];
            if (label[b] & 4) {
                base = blossombase[b];
                break;
            }
            assert(label[b] == 1);
            path.push_back(b);
            label[b] |= 4;
            assert(labelend[b] == mate[blossombase[b]]);
            if (labelend[b] == -1) {
                v = -1;
            } else {
                v = endpoint[labelend[b]];
                b = inblossom[v];
                assert(label[b] == 2);
                assert(labelend[b] >= 0);
                v = endpoint[labelend[b]];
            }
            if (w != -1)
                std::swap(v, w);
        }
        for (int b : path)
            label[b] &= ~4;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = int(edges[k][0]);
        int w = int(edges[k][1]);
        int bb = inblossom[base];
        int bv = inblossom[v];
        int bw = inblossom[w];
        int b = unusedblossoms.back();
        unusedblossoms.pop_back();
        blossombase[b] = base;
        blossomparent[b] = -1;
        blossomparent[bb] = b;
        std::vector<int>& path = blossomchilds[b];
        std::vector<int>& endps = blossomendps[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend[bv]);
            assert(label[bv] == 2 ||
                   (label[bv] == 1 && labelend[bv] == mate[blossombase[bv]]));
            assert(labelend[bv] >= 0);
            v = endpoint[labelend[bv]];
            bv = inblossom[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend[bw] ^ 1);
            assert(label[bw] == 2 ||
                   (label[bw] == 1 && labelend[bw] == mate[blossombase[bw]]));
            assert(labelend[bw] >= 0);
            w = endpoint[labelend[bw]];
            bw = inblossom[w];
        }
        assert(label[bb] == 1);
        label[b] = 1;
        labelend[b] = labelend[bb];
        dualvar[b] = 0;
        std::vector<int> leaves;
        blossom_leaves(b, leaves);
        for (int x : leaves) {
            if (label[inblossom[x]] == 2)
                queue.push_back(x);
            inblossom[x] = b;
        }
        // Aggregate least-slack edges to other S-blossoms.
        std::vector<int> bestedgeto(2 * nvertex, -1);
        for (int child : path) {
            std::vector<std::vector<int>> nblists;
            if (blossombestedges[child].empty()) {
                std::vector<int> sub;
                blossom_leaves(child, sub);
                for (int x : sub) {
                    nblists.emplace_back();
                    for (int p : neighbend[x])
                        nblists.back().push_back(p / 2);
                }
            } else {
                nblists.push_back(blossombestedges[child]);
            }
            for (const auto& nblist : nblists) {
                for (int e : nblist) {
                    int i = int(edges[e][0]);
                    int j = int(edges[e][1]);
                    if (inblossom[j] == b)
                        std::swap(i, j);
                    int bj = inblossom[j];
                    if (bj != b && label[bj] == 1 &&
                        (bestedgeto[bj] == -1 || slack(e) < slack(bestedgeto[bj])))
                        bestedgeto[bj] = e;
                }
            }
            blossombestedges[child].clear();
            bestedge[child] = -1;
        }
        blossombestedges[b].clear();
        for (int e : bestedgeto)
            if (e != -1)
                blossombestedges[b].push_back(e);
        bestedge[b] = -1;
        for (int e : blossombestedges[b])
            if (bestedge[b] == -1 || slack(e) < slack(bestedge[b]))
                bestedge[b] = e;
    }

    void expand_blossom(int b, bool endstage) {
        for (int s : blossomchilds[b]) {
            blossomparent[s] = -1;
            if (s < nvertex) {
                inblossom[s] = s;
            } else if (endstage && dualvar[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                std::vector<int> leaves;
                blossom_leaves(s, leaves);
                for (int v : leaves)
                    inblossom[v] = s;
            }
        }
        if (!endstage && label[b] == 2) {
            // The expanding blossom carries a T-label; relabel the children
            // along the even-length arc from the entry child to the base and
            // leave the rest unlabeled or reachable from outside.
            assert(labelend[b] >= 0);
            int entrychild = inblossom[endpoint[labelend[b] ^ 1]];
            int nchilds = int(blossomchilds[b].size());
            int j = 0;
            while (blossomchilds[b][j] != entrychild)
                ++j;
            int jstep, endptrick;
            if (j & 1) {
                j -= nchilds;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            auto child_at = [&](int idx) {
                return blossomchilds[b][(idx % nchilds + nchilds) % nchilds];
            };
            auto endp_at = [&](int idx) {
                return blossomendps[b][(idx % nchilds + nchilds) % nchilds];
            };
            int p = labelend[b];
            while (j != 0) {
                label[endpoint[p ^ 1]] = 0;
                label[endpoint[endp_at(j - endptrick) ^ endptrick ^ 1]] = 0;
                assign_label(endpoint[p ^ 1], 2, p);
                allowedge[endp_at(j - endptrick) / 2] = 1;
                j += jstep;
                p = endp_at(j - endptrick) ^ endptrick;
                allowedge[p / 2] = 1;
                j += jstep;
            }
            // The base child keeps label T without stepping to its mate.
            int bv = child_at(j);
            label[endpoint[p ^ 1]] = label[bv] = 2;
            labelend[endpoint[p ^ 1]] = labelend[bv] = p;
            bestedge[bv] = -1;
            j += jstep;
            while (child_at(j) != entrychild) {
                bv = child_at(j);
                if (label[bv] == 1) {
                    j += jstep;
                    continue;
                }
                std::vector<int> leaves;
                blossom_leaves(bv, leaves);
                int reached = -1;
                for (int v : leaves)
                    if (label[v] != 0) {
                        reached = v;
                        break;
                    }
                if (reached != -1) {
                    assert(label[reached] == 2);
                    assert(inblossom[reached] == bv);
                    label[reached] = 0;
                    label[endpoint[mate[blossombase[bv]]]] = 0;
                    assign_label(reached, 2, labelend[reached]);
                }
                j += jstep;
            }
        }
        label[b] = labelend[b] = -1;
        blossomchilds[b].clear();
        blossomendps[b].clear();
        blossombase[b] = -1;
        blossombestedges[b].clear();
        bestedge[b] = -1;
        unusedblossoms.push_back(b);
    }

    // Swap matched and unmatched edges along the arc of blossom b between
    // vertex v and the blossom base, then rotate v to the base.
    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent[t] != b)
            t = blossomparent[t];
        if (t >= nvertex)
            augment_blossom(t, v);
        int nchilds = int(blossomchilds[b].size());
        int i = 0;
        while (blossomchilds[b][i] != t)
            ++i;
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= nchilds;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        auto child_at = [&](int idx) {
            return blossomchilds[b][(idx % nchilds + nchilds) % nchilds];
        };
        auto endp_at = [&](int idx) {
            return blossomendps[b][(idx % nchilds + nchilds) % nchilds];
        };
        while (j != 0) {
            j += jstep;
            t = child_at(j);
            int p = endp_at(j - endptrick) ^ endptrick;
            if (t >= nvertex)
                augment_blossom(t, endpoint[p]);
            j += jstep;
            t = child_at(j);
            if (t >= nvertex)
                augment_blossom(t, endpoint[p ^ 1]);
            mate[endpoint[p]] = p ^ 1;
            mate[endpoint[p ^ 1]] = p;
        }
        std::rotate(blossomchilds[b].begin(), blossomchilds[b].begin() + i,
                    blossomchilds[b].end());
        std::rotate(blossomendps[b].begin(), blossomendps[b].begin() + i,
                    blossomendps[b].end());
        blossombase[b] = blossombase[blossomchilds[b][0]];
        assert(blossombase[b] == v);
    }

    void augment_matching(int k) {
        int v = int(edges[k][0]);
        int w = int(edges[k][1]);
        const std::array<std::pair<int, int>, 2> sides{{{v, 2 * k + 1}, {w, 2 * k}}};
        for (auto [s, p] : sides) {
            for (;;) {
                int bs = inblossom[s];
                assert(label[bs] == 1);
                assert(labelend[bs] == mate[blossombase[bs]]);
                if (bs >= nvertex)
                    augment_blossom(bs, s);
                mate[s] = p;
                if (labelend[bs] == -1)
                    break;
                int t = endpoint[labelend[bs]];
                int bt = inblossom[t];
                assert(label[bt] == 2);
                assert(labelend[bt] >= 0);
                s = endpoint[labelend[bt]];
                int j = endpoint[labelend[bt] ^ 1];
                assert(blossombase[bt] == t);
                if (bt >= nvertex)
                    augment_blossom(bt, j);
                mate[j] = labelend[bt];
                p = labelend[bt] ^ 1;
            }
        }
    }

    std::vector<int> solve() {
        for (int stage = 0; stage < nvertex; ++stage) {
            std::fill(label.begin(), label.end(), 0);
            std::fill(bestedge.begin(), bestedge.end(), -1);
            for (int b = nvertex; b < 2 * nvertex; ++b)
                blossombestedges[b].clear();
            std::fill(allowedge.begin(), allowedge.end(), 0);
            queue.clear();
            for (int v = 0; v < nvertex; ++v)
                if (mate[v] == -1 && label[inblossom[v]] == 0)
                    assign_label(v, 1, -1);
            bool augmented = false;
            for (;;) {
                while (!queue.empty() && !augmented) {
                    int v = queue.back();
                    queue.pop_back();
                    assert(label[inblossom[v]] == 1);
                    for (int p : neighbend[v]) {
                        int k = p / 2;
                        int w = endpoint[p];
                        if (inblossom[v] == inblossom[w])
                            continue;
                        int64_t kslack = 0;
                        if (!allowedge[k]) {
                            kslack = slack(k);
                            if (kslack <= 0)
                                allowedge[k] = 1;
                        }
                        if (allowedge[k]) {
                            if (label[inblossom[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label[inblossom[w]] == 1) {
                                int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label[w] == 0) {
                                assert(label[inblossom[w]] == 2);
                                label[w] = 2;
                                labelend[w] = p ^ 1;
                            }
                        } else if (label[inblossom[w]] == 1) {
                            int b = inblossom[v];
                            if (bestedge[b] == -1 || kslack < slack(bestedge[b]))
                                bestedge[b] = k;
                        } else if (label[w] == 0) {
                            if (bestedge[w] == -1 || kslack < slack(bestedge[w]))
                                bestedge[w] = k;
                        }
                    }
                }
                if (augmented)
                    break;
                // Dual update: pick the smallest of the four classic deltas.
                int deltatype = -1;
                int64_t delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!maxcardinality) {
                    deltatype = 1;
                    delta = *std::min_element(dualvar.begin(), dualvar.begin() + nvertex);
                }
                for (int v = 0; v < nvertex; ++v) {
                    if (label[inblossom[v]] == 0 && bestedge[v] != -1) {
                        int64_t d = slack(bestedge[v]);
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 2;
                            deltaedge = bestedge[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * nvertex; ++b) {
                    if (blossomparent[b] == -1 && label[b] == 1 && bestedge[b] != -1) {
                        int64_t kslack = slack(bestedge[b]);
                        assert(kslack % 2 == 0);
                        int64_t d = kslack / 2;
                        if (deltatype == -1 || d < delta) {
                            delta = d;
                            deltatype = 3;
                            deltaedge = bestedge[b];
                        }
                    }
                }
                for (int b = nvertex; b < 2 * nvertex; ++b) {
                    if (blossombase[b] >= 0 && blossomparent[b] == -1 && label[b] == 2 &&
                        (deltatype == -1 || dualvar[b] < delta)) {
                        delta = dualvar[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    // Max-cardinality optimum; final update keeps duals valid.
                    assert(maxcardinality);
                    deltatype = 1;
                    delta = std::max<int64_t>(
                        0, *std::min_element(dualvar.begin(), dualvar.begin() + nvertex));
                }
                for (int v = 0; v < nvertex; ++v) {
                    if (label[inblossom[v]] == 1)
                        dualvar[v] -= delta;
                    else if (label[inblossom[v]] == 2)
                        dualvar[v] += delta;
                }
                for (int b = nvertex; b < 2 * nvertex; ++b) {
                    if (blossombase[b] >= 0 && blossomparent[b] == -1) {
                        if (label[b] == 1)
                            dualvar[b] += delta;
                        else if (label[b] == 2)
                            dualvar[b] -= delta;
                    }
                }
                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge[deltaedge] = 1;
                    int i = int(edges[deltaedge][0]);
                    if (label[inblossom[i]] == 0)
                        i = int(edges[deltaedge][1]);
                    assert(label[inblossom[i]] == 1);
                    queue.push_back(i);
                } else if (deltatype == 3) {
                    allowedge[deltaedge] = 1;
                    int i = int(edges[deltaedge][0]);
                    assert(label[inblossom[i]] == 1);
                    queue.push_back(i);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented)
                break;
            for (int b = nvertex; b < 2 * nvertex; ++b)
                if (blossomparent[b] == -1 && blossombase[b] >= 0 && label[b] == 1 &&
                    dualvar[b] == 0)
                    expand_blossom(b, true);
        }
        std::vector<int> result(nvertex, -1);
        for (int v = 0; v < nvertex; ++v)
            if (mate[v] >= 0)
                result[v] = endpoint[mate[v]];
        for (int v = 0; v < nvertex; ++v)
            assert(result[v] == -1 || result[result[v]] == v);
        return result;
    }
};

} // namespace

std::vector<int> max_weight_matching(int num_vertices,
                                     const std::vector<std::array<int64_t, 3>>& edges,
                                     bool max_cardinality) {
    if (num_vertices == 0 || edges.empty())
        return std::vector<int>(num_vertices, -1);
    for (const auto& e : edges) {
        if (e[0] < 0 || e[1] < 0 || e[0] >= num_vertices || e[1] >= num_vertices ||
            e[0] == e[1])
            throw std::invalid_argument("malformed matching edge");
        if (e[2] < 0)
            throw std::invalid_argument("matching edge weights must be nonnegative");
    }
    Matching m(num_vertices, edges, max_cardinality);
    return m.solve();
}

} // namespace eml::detail
