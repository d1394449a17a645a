// Waldhausen S-construction of finite-dimensional vector spaces over F_q.  A simplex of
// level n is a staircase A_ij (0 <= i <= j <= n, A_ii = 0) with horizontal monos
// h_ij: A_ij -> A_i,j+1 and vertical epis u_ij: A_ij -> A_i+1,j.  Since short exact
// sequences split, the staircase is determined up to isomorphism by v_j = dim A_0j,
// and dim A_ij = v_j - v_i.  Automorphisms are tuples of invertible matrices, acting
// on F_q^d as permutations of its q^d vectors.

#include <map>
#include <numeric>

#include "gallery_common.hpp"

namespace dsp {

namespace {

struct Matrix {
  int rows = 0, cols = 0;
  std::vector<int> a;  // row-major
  int& at(int r, int c) { return a[r * cols + c]; }
  int at(int r, int c) const { return a[r * cols + c]; }
};

Matrix identity_matrix(int d) {
  Matrix m{d, d, std::vector<int>(d * d, 0)};
  for (int i = 0; i < d; ++i) m.at(i, i) = 1;
  return m;
}

Matrix multiply(const Matrix& x, const Matrix& y, int q) {
  Matrix m{x.rows, y.cols, std::vector<int>(x.rows * y.cols, 0)};
  for (int r = 0; r < x.rows; ++r)
    for (int c = 0; c < y.cols; ++c) {
      int s = 0;
      for (int k = 0; k < x.cols; ++k) s += x.at(r, k) * y.at(k, c);
      m.at(r, c) = s % q;
    }
  return m;
}

int ipow(int q, int d) {
  int r = 1;
  while (d-- > 0) r *= q;
  return r;
}

std::vector<int> to_vector(int idx, int d, int q) {
  std::vector<int> v(d);
  for (int k = 0; k < d; ++k, idx /= q) v[k] = idx % q;
  return v;
}

int to_index(const std::vector<int>& v, int q) {
  int idx = 0;
  for (int k = static_cast<int>(v.size()); k-- > 0;) idx = idx * q + v[k];
  return idx;
}

Perm matrix_perm(const Matrix& m, int q) {
  const int n = ipow(q, m.cols);
  Perm p(n);
  for (int idx = 0; idx < n; ++idx) {
    const auto v = to_vector(idx, m.cols, q);
    std::vector<int> w(m.rows, 0);
    for (int r = 0; r < m.rows; ++r) {
      int s = 0;
      for (int c = 0; c < m.cols; ++c) s += m.at(r, c) * v[c];
      w[r] = s % q;
    }
    p[idx] = static_cast<std::uint16_t>(to_index(w, q));
  }
  return p;
}

Matrix perm_matrix(const Perm& p, int d, int q) {
  Matrix m{d, d, std::vector<int>(d * d, 0)};
  for (int c = 0; c < d; ++c) {
    std::vector<int> e(d, 0);
    e[c] = 1;
    const auto col = to_vector(p[to_index(e, q)], d, q);
    for (int r = 0; r < d; ++r) m.at(r, c) = col[r];
  }
  return m;
}

int rank(Matrix m, int q) {
  int rk = 0;
  for (int c = 0; c < m.cols && rk < m.rows; ++c) {
    int piv = -1;
    for (int r = rk; r < m.rows; ++r)
      if (m.at(r, c)) piv = r;
    if (piv < 0) continue;
    for (int k = 0; k < m.cols; ++k) std::swap(m.at(piv, k), m.at(rk, k));
    const int inv = m.at(rk, c) == 1 ? 1 : (q == 3 ? 2 : 1);
    for (int r = 0; r < m.rows; ++r) {
      if (r == rk || !m.at(r, c)) continue;
      const int f = (m.at(r, c) * inv) % q;
      for (int k = 0; k < m.cols; ++k) m.at(r, k) = ((m.at(r, k) - f * m.at(rk, k)) % q + q) % q;
    }
    ++rk;
  }
  return rk;
}

// Transvections, plus diag(2, 1, ..) over F_3.
std::vector<Perm> gl_generators(int d, int q) {
  std::vector<Perm> gens;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) {
        Matrix t = identity_matrix(d);
        t.at(i, j) = 1;
        gens.push_back(matrix_perm(t, q));
      }
  if (q == 3 && d > 0) {
    Matrix t = identity_matrix(d);
    t.at(0, 0) = 2;
    gens.push_back(matrix_perm(t, q));
  }
  return gens;
}

void require_field(int q) {
  if (q != 2 && q != 3) throw UnsupportedField("only F_2 and F_3 are supported, got q = " + std::to_string(q));
}

// Positions of the components of a level-n staircase inside its payload and arrows.
struct Layout {
  int n = 0, q = 2;
  std::vector<int> v;  // v[0] = 0, .., v[n]
  std::map<std::pair<int, int>, int> h_off, u_off, comp_off;
  int dim(int i, int j) const { return v[j] - v[i]; }

  Layout(int n_, int q_, const Payload& p) : n(n_), q(q_), v(n_ + 1, 0) {
    for (int j = 1; j <= n; ++j) v[j] = p[j - 1];
    int off = n, coff = 0;
    for (int i = 0; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        if (j < n) {
          h_off[{i, j}] = off;
          off += dim(i, j + 1) * dim(i, j);
        }
        if (i < j) {
          u_off[{i, j}] = off;
          off += dim(i + 1, j) * dim(i, j);
          comp_off[{i, j}] = coff;
          coff += ipow(q, dim(i, j));
        }
      }
  }
  Matrix get(const Payload& p, int off, int rows, int cols) const {
    return {rows, cols, std::vector<int>(p.begin() + off, p.begin() + off + rows * cols)};
  }
  Matrix h(const Payload& p, int i, int j) const { return get(p, h_off.at({i, j}), dim(i, j + 1), dim(i, j)); }
  Matrix u(const Payload& p, int i, int j) const { return get(p, u_off.at({i, j}), dim(i + 1, j), dim(i, j)); }
  // Component (i, j) of an arrow; the zero object A_ii has the trivial group on one point.
  Perm component(const Perm& g, int i, int j) const {
    if (i == j) return identity_perm(1);
    return slice(g, comp_off.at({i, j}), ipow(q, dim(i, j)));
  }
};

Payload standard(int n, const std::vector<int>& v) {
  Payload p(v.begin() + 1, v.end());
  auto dim = [&](int i, int j) { return v[j] - v[i]; };
  auto put = [&](int rows, int cols, int shift) {
    // Entry (r, c) is 1 when r = c + shift.
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) p.push_back(r == c + shift ? 1 : 0);
  };
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      if (j < n) put(dim(i, j + 1), dim(i, j), 0);
      if (i < j) put(dim(i + 1, j), dim(i, j), -(v[i + 1] - v[i]));
    }
  return p;
}

// Payload of the staircase A'_ij = A_f(i)f(j) for f: [m] -> [n].
Payload reindex(const Layout& L, const Payload& p, const DeltaMap& f) {
  const int m = f.dom, q = L.q;
  Payload out;
  for (int j = 1; j <= m; ++j) out.push_back(L.v[f(j)] - L.v[f(0)]);
  auto horizontal = [&](int a, int b, int c) {  // A_ab -> A_ac
    Matrix x = identity_matrix(L.dim(a, b));
    for (int t = b; t < c; ++t) x = multiply(L.h(p, a, t), x, q);
    return x;
  };
  auto vertical = [&](int a, int b, int c) {  // A_ac -> A_bc
    Matrix x = identity_matrix(L.dim(a, c));
    for (int t = a; t < b; ++t) x = multiply(L.u(p, t, c), x, q);
    return x;
  };
  for (int i = 0; i <= m; ++i)
    for (int j = i; j <= m; ++j) {
      if (j < m) {
        const Matrix x = horizontal(f(i), f(j), f(j + 1));
        out.insert(out.end(), x.a.begin(), x.a.end());
      }
      if (i < j) {
        const Matrix x = vertical(f(i), f(i + 1), f(j));
        out.insert(out.end(), x.a.begin(), x.a.end());
      }
    }
  return out;
}

Perm reindex_arrow(const Layout& L, const Perm& g, const DeltaMap& f) {
  Perm out;
  for (int i = 0; i <= f.dom; ++i)
    for (int j = i + 1; j <= f.dom; ++j) out = direct_sum(out, L.component(g, f(i), f(j)));
  return out;
}

std::string dims_key(const std::vector<int>& dims) {
  if (dims.size() == 1) return std::to_string(dims[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
  return s + ")";
}

}  // namespace

SPtr vect_S(int q, int max_total_dim, int N) {
  require_field(q);
  std::vector<AGPtr> levels;
  for (int n = 0; n <= N; ++n) {
    std::vector<ActionGroupoid::Block> blocks;
    std::vector<ActionGroupoid::Object> objs;
    auto act = [n, q](const Payload& p, int, const Perm& g) {
      const Layout L(n, q, p);
      Payload out(p.begin(), p.begin() + n);
      auto mat = [&](int i, int j) { return perm_matrix(L.component(g, i, j), L.dim(i, j), q); };
      auto inv = [&](int i, int j) { return perm_matrix(inverse(L.component(g, i, j)), L.dim(i, j), q); };
      for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j) {
          if (j < n) {
            const Matrix x = multiply(mat(i, j + 1), multiply(L.h(p, i, j), inv(i, j), q), q);
            out.insert(out.end(), x.a.begin(), x.a.end());
          }
          if (i < j) {
            const Matrix x = multiply(mat(i + 1, j), multiply(L.u(p, i, j), inv(i, j), q), q);
            out.insert(out.end(), x.a.begin(), x.a.end());
          }
        }
      return out;
    };
    std::vector<int> v(n + 1, 0);
    std::function<void(int)> rec = [&](int j) {
      if (j <= n) {
        for (int d = v[j - 1]; d <= max_total_dim; ++d) {
          v[j] = d;
          rec(j + 1);
        }
        return;
      }
      std::vector<std::vector<Perm>> per;
      std::vector<std::size_t> degs;
      for (int a = 0; a <= n; ++a)
        for (int b = a + 1; b <= n; ++b) {
          per.push_back(gl_generators(v[b] - v[a], q));
          degs.push_back(ipow(q, v[b] - v[a]));
        }
      const int block = static_cast<int>(blocks.size());
      blocks.push_back({std::accumulate(degs.begin(), degs.end(), std::size_t{0}), direct_sum_generators(per, degs)});
      for (auto& p : detail::orbit(standard(n, v), blocks.back().gens,
                                   [&](const Payload& x, const Perm& g) { return act(x, block, g); }))
        objs.push_back({std::move(p), block, v[n]});
    };
    rec(1);
    auto render = [n, q](const Payload& p) {
      const Layout L(n, q, p);
      std::string s = dims_key(std::vector<int>(L.v.begin() + 1, L.v.end()));
      if (p.size() > static_cast<std::size_t>(n)) {
        s += " maps=";
        for (std::size_t k = n; k < p.size(); ++k) s += std::to_string(p[k]);
      }
      return s;
    };
    auto canon = [n](const Payload& p) {
      if (n == 0) return std::string("0");
      return dims_key(std::vector<int>(p.begin(), p.begin() + n));
    };
    levels.push_back(std::make_shared<ActionGroupoid>("S_" + std::to_string(n), std::move(blocks), std::move(objs),
                                                      act, render, canon));
  }
  auto make = [&](int n, const DeltaMap& f, std::string name) {
    return detail::payload_functor(
        levels[n], levels[f.dom], [n, q, f](const Payload& p) { return reindex(Layout(n, q, p), p, f); },
        [n, q, f](const Payload& p, const Perm& g) { return reindex_arrow(Layout(n, q, p), g, f); }, std::move(name));
  };
  auto face = [&](int n, int i) { return make(n, coface(n, i), "d_" + std::to_string(i)); };
  auto degen = [&](int n, int i) { return make(n, codegeneracy(n, i), "s_" + std::to_string(i)); };
  return detail::assemble("S(vect_" + std::to_string(q) + ")", N, max_total_dim, levels, face, degen);
}

FiniteCategory monos_category(int q, int max_dim) {
  require_field(q);
  FiniteCategory C;
  C.name = "mono(vect_" + std::to_string(q) + ")";
  for (int d = 0; d <= max_dim; ++d) {
    C.grade.push_back(d);
    C.aut_degree.push_back(ipow(q, d));
    C.aut_gens.push_back(gl_generators(d, q));
  }
  C.homs = [q](int a, int b) {
    std::vector<Payload> out;
    const int cells = a * b;
    const int total = ipow(q, cells);
    for (int code = 0; code < total; ++code) {
      Matrix m{b, a, to_vector(code, cells, q)};
      if (rank(m, q) == a) out.push_back(m.a);
    }
    return out;
  };
  C.compose = [q](int a, int b, int c, const Payload& f, const Payload& g) {
    return multiply(Matrix{c, b, g}, Matrix{b, a, f}, q).a;
  };
  C.identity = [](int a) { return identity_matrix(a).a; };
  C.act = [q](int a, int b, const Payload& f, const Perm& ha, const Perm& hb) {
    const Matrix x = multiply(perm_matrix(hb, b, q), multiply(Matrix{b, a, f}, perm_matrix(inverse(ha), a, q), q), q);
    return x.a;
  };
  C.render = [](int a, int b, const Payload& f) {
    std::string s = std::to_string(a) + "->" + std::to_string(b) + ":[";
    for (int r = 0; r < b; ++r) {
      if (r) s += ";";
      for (int c = 0; c < a; ++c) s += std::to_string(f[r * a + c]);
    }
    return s + "]";
  };
  C.string_key = [](const std::vector<int>& objs) {
    std::string s;
    for (std::size_t i = 0; i < objs.size(); ++i) s += (i ? "->" : "") + std::to_string(objs[i]);
    return s;
  };
  return C;
}

SimpMap bottom_row(const Dec& dec_bot_V, const SPtr& monos) {
  const SPtr& D = dec_bot_V.space;
  if (D->N != monos->N) throw TruncationMismatch("Dec_bot(S) and the mono nerve are truncated at different levels");
  // Recover q from the arrow degree of a one-dimensional object, if any.
  int q = 2;
  for (Obj x = 0; x < D->levels[0]->size(); ++x)
    if (D->levels[0]->grade(x) == 1) q = static_cast<int>(D->levels[0]->degree(x));
  const FiniteCategory C = monos_category(q, monos->grade_bound >= 0 ? monos->grade_bound : 0);
  auto homs = std::make_shared<std::vector<std::vector<std::map<Payload, int>>>>();
  homs->assign(C.num_objects(), std::vector<std::map<Payload, int>>(C.num_objects()));
  for (int a = 0; a < C.num_objects(); ++a)
    for (int b = 0; b < C.num_objects(); ++b) {
      const auto list = C.homs(a, b);
      for (std::size_t k = 0; k < list.size(); ++k) (*homs)[a][b][list[k]] = static_cast<int>(k);
    }
  SimpMap F{D, monos, {}, "bottom row"};
  for (int k = 0; k <= D->N; ++k) {
    const int n = k + 1;
    auto obj = [homs, n, q](const Payload& p) {
      const Layout L(n, q, p);
      Payload out(L.v.begin() + 1, L.v.end());
      for (int j = 1; j < n; ++j) out.push_back(homs->at(L.v[j]).at(L.v[j + 1]).at(L.h(p, 0, j).a));
      return out;
    };
    auto arr = [n, q](const Payload& p, const Perm& g) {
      const Layout L(n, q, p);
      Perm out;
      for (int j = 1; j <= n; ++j) out = direct_sum(out, L.component(g, 0, j));
      return out;
    };
    F.comp.push_back(detail::payload_functor(detail::action_level(D->levels[k]), detail::action_level(monos->levels[k]),
                                             obj, arr, "bottom row"));
  }
  return F;
}

}  // namespace dsp
