#include "germrenorm/continuation.hpp"

#include "germrenorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

namespace germrenorm {

namespace {

double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// 1/(x + b) expanded about x = 0
std::vector<double> inverse_linear_series(double b, int order) {
  std::vector<double> s(order + 1);
  double p = 1.0 / b;
  for (int n = 0; n <= order; ++n) {
    s[n] = p;
    p *= -1.0 / b;
  }
  return s;
}

std::vector<double> series_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size(), 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; i + j < a.size() && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

// Regular part of (-1)^i / prod_{r=0}^{last} (x + a + r), dropping the factor
// r = -a when present; `polar` reports whether it was dropped.
std::vector<double> option_series(int a, int last, int order, bool& polar) {
  std::vector<double> s(order + 1, 0.0);
  s[0] = (last % 2 == 0) ? 1.0 : -1.0;
  polar = false;
  for (int r = 0; r <= last; ++r) {
    if (a + r == 0) {
      polar = true;
      continue;
    }
    s = series_mul(s, inverse_linear_series(a + r, order));
  }
  return s;
}

std::vector<std::vector<double>> forms_matrix(const std::vector<LinearForm>& lambda) {
  std::vector<std::vector<double>> A;
  for (const auto& f : lambda) A.push_back(f.to_doubles());
  return A;
}

std::string cache_path(const std::string& key) {
  const char* dir = std::getenv("GERMRENORM_CACHE_DIR");
  if (!dir || !*dir || key.empty()) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return (std::filesystem::path(dir) / (std::string("chi_") + buf + ".bin")).string();
}

bool read_cache(const std::string& path, const std::string& key, std::vector<double>& data) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  uint64_t klen = 0, n = 0;
  in.read(reinterpret_cast<char*>(&klen), sizeof klen);
  if (!in || klen != key.size()) return false;
  std::string stored(klen, '\0');
  in.read(stored.data(), static_cast<std::streamsize>(klen));
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  if (!in || stored != key || n != data.size()) return false;
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(n * sizeof(double)));
  return static_cast<bool>(in);
}

void write_cache(const std::string& path, const std::string& key, const std::vector<double>& data) {
  std::error_code ec;
  std::filesystem::create_directories(std::filesystem::path(path).parent_path(), ec);
  const std::string tmp = path + ".tmp";
  std::ofstream out(tmp, std::ios::binary);
  if (!out) return;
  const uint64_t klen = key.size(), n = data.size();
  out.write(reinterpret_cast<const char*>(&klen), sizeof klen);
  out.write(key.data(), static_cast<std::streamsize>(klen));
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(n * sizeof(double)));
  out.close();
  std::filesystem::rename(tmp, path, ec);
}

}  // namespace

std::vector<int> minimal_depths(const std::vector<int>& offset) {
  std::vector<int> k;
  for (int a : offset) k.push_back(std::max(0, 1 - a));
  return k;
}

CubeGrid::CubeGrid(std::vector<int> depth, int nodes, const ChiFunction& chi, int jobs, const std::string& cache_key,
                   double cut)
    : depth_(std::move(depth)), rule_(tanh_sinh_unit(nodes, cut)) {
  const int E = dim();
  const int N = rule_.size();
  size_t total = 1;
  std::vector<int> points;
  for (int j = 0; j < E; ++j) {
    extent_.push_back(N + depth_[j]);
    total *= extent_.back();
    points.push_back(N + (depth_[j] > 0 ? 1 : 0));
  }
  data_.assign(total, 0.0);

  std::string key;
  if (!cache_key.empty()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, ";grid=%d:%.3e:", nodes, cut);
    key = cache_key + buf;
    for (int k : depth_) key += std::to_string(k) + ",";
  }
  const std::string path = cache_path(key);
  if (!path.empty() && read_cache(path, key, data_)) return;

  long npoints = 1;
  for (int p : points) npoints *= p;
  auto box = BoxShape::get(depth_);
  std::vector<size_t> stride(E, 1);
  for (int j = E - 2; j >= 0; --j) stride[j] = stride[j + 1] * extent_[j + 1];

  auto work = [&](long begin, long end) {
    std::vector<int> idx(E);
    std::vector<double> t(E);
    std::vector<int> choice(E), count(E), beta(E);
    for (long p = begin; p < end; ++p) {
      long r = p;
      for (int j = E - 1; j >= 0; --j) {
        idx[j] = static_cast<int>(r % points[j]);
        r /= points[j];
        t[j] = idx[j] < N ? rule_.t[idx[j]] : 1.0;
      }
      const TJet c = chi(t, box);
      // expand endpoint axes over their derivative orders
      std::fill(choice.begin(), choice.end(), 0);
      for (int j = 0; j < E; ++j) count[j] = idx[j] < N ? 1 : depth_[j];
      while (true) {
        size_t off = 0;
        for (int j = 0; j < E; ++j) {
          if (idx[j] < N) {
            beta[j] = depth_[j];
            off += stride[j] * idx[j];
          } else {
            beta[j] = choice[j];
            off += stride[j] * (N + choice[j]);
          }
        }
        data_[off] = c[box->index(beta)];
        int j = E - 1;
        while (j >= 0 && ++choice[j] == count[j]) choice[j--] = 0;
        if (j < 0) break;
      }
    }
  };
  jobs = std::max(1, jobs);
  if (jobs == 1 || npoints < 2 * jobs) {
    work(0, npoints);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(jobs);
    for (int w = 0; w < jobs; ++w) {
      const long b = npoints * w / jobs, e = npoints * (w + 1) / jobs;
      pool.emplace_back([&, w, b, e] {
        try {
          work(b, e);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& ep : errors)
      if (ep) std::rethrow_exception(ep);
  }
  if (!path.empty()) write_cache(path, key, data_);
}

std::vector<double> CubeGrid::contract(const std::vector<std::vector<Functional>>& f) const {
  const int E = dim();
  const int N = rule_.size();
  std::vector<double> cur = data_;
  std::vector<int> dims = extent_;
  for (int j = 0; j < E; ++j) {
    const int F = static_cast<int>(f[j].size());
    std::vector<std::vector<double>> C(F, std::vector<double>(extent_[j], 0.0));
    for (int o = 0; o < F; ++o) {
      const auto& fn = f[j][o];
      if (fn.endpoint) {
        if (fn.deriv >= depth_[j]) throw PreconditionError("endpoint derivative beyond the IBP depth");
        C[o][N + fn.deriv] = factorial(fn.deriv);
      } else {
        const double fk = factorial(depth_[j]);
        for (int i = 0; i < N; ++i) C[o][i] = fn.w[i] * fk;
      }
    }
    size_t pre = 1, post = 1;
    for (int i = 0; i < j; ++i) pre *= dims[i];
    for (int i = j + 1; i < E; ++i) post *= dims[i];
    const int M = dims[j];
    std::vector<double> next(pre * F * post, 0.0);
    for (size_t a = 0; a < pre; ++a)
      for (int o = 0; o < F; ++o) {
        double* dst = &next[(a * F + o) * post];
        for (int m = 0; m < M; ++m) {
          const double c = C[o][m];
          if (c == 0.0) continue;
          const double* src = &cur[(a * M + m) * post];
          for (size_t b = 0; b < post; ++b) dst[b] += c * src[b];
        }
      }
    cur.swap(next);
    dims[j] = F;
  }
  return cur;
}

namespace {

struct AxisPlan {
  int a, k;
  std::vector<CubeGrid::Functional> fine, coarse;
};

}  // namespace

CubeResult ibp_cube_raw(const CubeIntegralSpec& spec, const CubeGrid& grid) {
  const int E = spec.dim;
  if (static_cast<int>(spec.lambda.size()) != E || static_cast<int>(spec.offset.size()) != E)
    throw PreconditionError("cube spec needs one exponent per axis");
  const auto& depth = grid.depth();
  const int p = E > 0 ? spec.lambda.front().dim() : 0;
  int npolar = 0;
  for (int j = 0; j < E; ++j) {
    if (depth[j] < std::max(0, 1 - spec.offset[j]))
      throw PreconditionError("IBP depth below the required depth on axis " + std::to_string(j + 1));
    if (spec.offset[j] <= 0) ++npolar;
  }
  const int D = spec.order;
  const int Lmax = D + npolar;
  const auto& rule = grid.rule();

  std::vector<AxisPlan> plan(E);
  for (int j = 0; j < E; ++j) {
    auto& P = plan[j];
    P.a = spec.offset[j];
    P.k = depth[j];
    for (int i = 0; i < P.k; ++i) {
      P.fine.push_back({true, i, {}});
      P.coarse.push_back({true, i, {}});
    }
    const double b = P.a + P.k - 1;
    for (int l = 0; l <= Lmax; ++l) {
      CubeGrid::Functional ff{false, P.k, {}}, fc{false, P.k, {}};
      const double lf = factorial(l);
      for (int i = 0; i < rule.size(); ++i) {
        const double t = rule.t[i];
        const double g = std::pow(t, b) * std::pow(std::log(t), l) / lf;
        ff.w.push_back(rule.w[i] * g);
        fc.w.push_back(rule.w_coarse[i] * g);
      }
      P.fine.push_back(std::move(ff));
      P.coarse.push_back(std::move(fc));
    }
  }
  std::vector<std::vector<CubeGrid::Functional>> ffine, fcoarse;
  for (const auto& P : plan) {
    ffine.push_back(P.fine);
    fcoarse.push_back(P.coarse);
  }
  const std::vector<double> Tf = grid.contract(ffine), Tc = grid.contract(fcoarse);
  std::vector<size_t> stride(E, 1);
  for (int j = E - 2; j >= 0; --j) stride[j] = stride[j + 1] * (plan[j + 1].k + Lmax + 1);

  // numerators in lambda space grouped by polar pattern
  std::map<uint32_t, std::pair<Jet, Jet>> acc;
  std::vector<int> type(E, 0);  // option per axis: i < k boundary, k remainder
  while (true) {
    uint32_t S = 0;
    int nS = 0;
    std::vector<std::vector<double>> coef(E);
    std::vector<bool> pol(E);
    for (int j = 0; j < E; ++j) {
      const bool rem = type[j] == plan[j].k;
      const int last = rem ? plan[j].k - 1 : type[j];
      bool polar = false;
      coef[j] = option_series(plan[j].a, last, Lmax, polar);
      if (rem)  // the remainder sign is (-1)^k, one past `last`
        for (auto& c : coef[j]) c = -c;
      if (polar) {
        S |= 1u << j;
        ++nS;
      }
    }
    const int O = D + nS;
    Jet nf(E, O), nc(E, O);
    // remainder axes carry log powers
    std::vector<int> ell(E, 0);
    while (true) {
      int deg = 0;
      size_t off = 0;
      for (int j = 0; j < E; ++j) {
        deg += ell[j];
        off += stride[j] * (type[j] == plan[j].k ? plan[j].k + ell[j] : type[j]);
      }
      if (deg <= O) {
        const int idx = nf.table().index(MonomialTable::pack(ell));
        nf[idx] += Tf[off];
        nc[idx] += Tc[off];
      }
      int j = E - 1;
      while (j >= 0 && (type[j] != plan[j].k || ++ell[j] > O)) {
        if (type[j] == plan[j].k) ell[j] = 0;
        --j;
      }
      if (j < 0) break;
    }
    for (int j = 0; j < E; ++j) {
      std::vector<cplx> s(coef[j].begin(), coef[j].begin() + (O + 1));
      nf = nf.mul_univariate(j, s);
      nc = nc.mul_univariate(j, s);
    }
    auto it = acc.find(S);
    if (it == acc.end()) acc.emplace(S, std::make_pair(nf, nc));
    else {
      it->second.first += nf;
      it->second.second += nc;
    }
    int j = E - 1;
    while (j >= 0 && ++type[j] > plan[j].k) type[j--] = 0;
    if (j < 0) break;
  }

  CubeResult out;
  out.raw = RawGerm(p);
  const auto A = forms_matrix(spec.lambda);
  for (auto& [S, nums] : acc) {
    Jet diff = nums.first - nums.second;
    out.quad_error = std::max(out.quad_error, diff.max_abs());
    std::vector<Denominator> dens;
    for (int j = 0; j < E; ++j)
      if (S & (1u << j)) dens.push_back({spec.lambda[j], 1});
    out.raw.add(nums.first.compose_linear(A, p), dens);
  }
  return out;
}

CubeResult ibp_cube_raw(const CubeIntegralSpec& spec) {
  std::vector<int> depth = spec.depth.empty() ? minimal_depths(spec.offset) : spec.depth;
  CubeGrid grid(depth, spec.nodes, spec.chi, spec.jobs, "", spec.cut);
  return ibp_cube_raw(spec, grid);
}

MeromorphicGerm ibp_extend_cube(const CubeIntegralSpec& spec) { return decompose(ibp_cube_raw(spec).raw, spec.order); }

double ibp_cube_value(const std::vector<int>& offset, const CubeGrid& grid, const std::vector<double>& lambda) {
  const int E = grid.dim();
  const auto& depth = grid.depth();
  const auto& rule = grid.rule();
  std::vector<std::vector<CubeGrid::Functional>> f(E);
  std::vector<std::vector<double>> coef(E);  // per option
  for (int j = 0; j < E; ++j) {
    const int a = offset[j], k = depth[j];
    const double x = lambda[j];
    if (!(x + a + k > 0)) throw PreconditionError("remainder integral diverges at this point");
    double c = 1;
    for (int i = 0; i < k; ++i) {
      c *= 1.0 / (x + a + i);
      f[j].push_back({true, i, {}});
      coef[j].push_back(((i % 2) ? -1.0 : 1.0) * c);
    }
    CubeGrid::Functional r{false, k, {}};
    for (int i = 0; i < rule.size(); ++i) r.w.push_back(rule.w[i] * std::pow(rule.t[i], x + a + k - 1));
    f[j].push_back(std::move(r));
    double cr = (k % 2) ? -1.0 : 1.0;
    for (int i = 0; i < k; ++i) cr /= (x + a + i);
    coef[j].push_back(cr);
  }
  const std::vector<double> T = grid.contract(f);
  double total = 0;
  std::vector<int> o(E, 0);
  for (size_t idx = 0; idx < T.size(); ++idx) {
    double c = T[idx];
    for (int j = 0; j < E; ++j) c *= coef[j][o[j]];
    total += c;
    int j = E - 1;
    while (j >= 0 && ++o[j] == depth[j] + 1) o[j--] = 0;
  }
  return total;
}

RawGerm model_integral_raw(const TPolynomial& psi, const std::vector<LinearForm>& lambda,
                           const std::vector<int>& offset, int order) {
  const int E = static_cast<int>(lambda.size());
  const int p = E > 0 ? lambda.front().dim() : 0;
  const auto A = forms_matrix(lambda);
  RawGerm raw(p);
  for (const auto& [beta, c] : psi) {
    std::vector<Denominator> dens;
    for (int j = 0; j < E; ++j)
      if (offset[j] + beta[j] == 0) dens.push_back({lambda[j], 1});
    const int O = order + static_cast<int>(dens.size());
    Jet num = Jet::constant(E, O, c);
    for (int j = 0; j < E; ++j) {
      const int b = offset[j] + beta[j];
      if (b == 0) continue;
      auto s = inverse_linear_series(b, O);
      num = num.mul_univariate(j, std::vector<cplx>(s.begin(), s.end()));
    }
    raw.add(num.compose_linear(A, p), dens);
  }
  return raw;
}

MeromorphicGerm model_integral_exact(const TPolynomial& psi, const std::vector<LinearForm>& lambda,
                                     const std::vector<int>& offset, int order) {
  return decompose(model_integral_raw(psi, lambda, offset, order), order);
}

PolynomialChi::PolynomialChi(const TPolynomial& psi, int dim) : dim_(dim) {
  for (const auto& [beta, c] : psi) {
    if (static_cast<int>(beta.size()) != dim) throw InputError("monomial has the wrong number of variables");
    for (int b : beta) top_ = std::max(top_, b);
  }
  size_t n = 1;
  for (int j = 0; j < dim; ++j) n *= top_ + 1;
  dense_.assign(n, 0.0);
  for (const auto& [beta, c] : psi) {
    size_t idx = 0;
    for (int j = 0; j < dim; ++j) idx = idx * (top_ + 1) + beta[j];
    dense_[idx] += c;
  }
}

TJet PolynomialChi::operator()(const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) const {
  const int E = dim_, top = top_;
  const auto& deg = box->deg();
  // scratch buffers are reused: this runs once per grid point
  static thread_local std::vector<double> cur, next, shift, power;
  std::vector<int> dims(E, top + 1);
  cur = dense_;
  // re-expand one axis at a time: t^b = sum_k C(b, k) t_j^(b - k) (t - t_j)^k
  for (int j = 0; j < E; ++j) {
    const int K = deg[j] + 1;
    shift.assign(static_cast<size_t>(K) * (top + 1), 0.0);  // [k][b]
    power.assign(top + 1, 1.0);
    for (int b = 1; b <= top; ++b) power[b] = power[b - 1] * t[j];
    for (int b = 0; b <= top; ++b) {
      double binom = 1;
      for (int k = 0; k <= std::min(b, deg[j]); ++k) {
        shift[k * (top + 1) + b] = binom * power[b - k];
        binom = binom * (b - k) / (k + 1);
      }
    }
    size_t outer = 1, inner = 1;
    for (int i = 0; i < j; ++i) outer *= dims[i];
    for (int i = j + 1; i < E; ++i) inner *= dims[i];
    next.assign(outer * K * inner, 0.0);
    for (size_t o = 0; o < outer; ++o)
      for (int k = 0; k < K; ++k)
        for (int b = k; b <= top; ++b) {
          const double w = shift[k * (top + 1) + b];
          const double* src = &cur[(o * (top + 1) + b) * inner];
          double* dst = &next[(o * K + k) * inner];
          for (size_t i = 0; i < inner; ++i) dst[i] += w * src[i];
        }
    cur.swap(next);
    dims[j] = K;
  }
  TJet r(box, 0.0);
  for (int i = 0; i < box->size(); ++i) r[i] = cur[i];
  return r;
}

TJet polynomial_tjet(const TPolynomial& psi, const std::vector<double>& t, const std::shared_ptr<const BoxShape>& box) {
  return PolynomialChi(psi, static_cast<int>(t.size()))(t, box);
}

}  // namespace germrenorm
