#include "strata/stratification.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace strata {

using nlohmann::ordered_json;

Stratification::Stratification(std::vector<Stratum> strata, Box domain)
    : strata_(std::move(strata)), domain_(std::move(domain)) {
  if (strata_.empty()) throw Error("stratification needs at least one stratum");
  std::set<int> dims;
  int max_id = -1;
  std::set<int> ids;
  for (const auto& s : strata_) {
    if (s.ambient_dim() != domain_.dim()) {
      throw Error("stratum ambient dimension does not match the domain box");
    }
    if (!ids.insert(s.id()).second) throw Error("duplicate stratum id");
    max_id = std::max(max_id, s.id());
    dims.insert(s.dim());
  }
  active_dims_.assign(dims.begin(), dims.end());
  id_to_index_.assign(static_cast<size_t>(max_id) + 1, -1);
  for (size_t i = 0; i < strata_.size(); ++i) {
    id_to_index_[static_cast<size_t>(strata_[i].id())] = static_cast<int>(i);
  }
}

const Stratum& Stratification::by_id(int id) const {
  if (id < 0 || id >= static_cast<int>(id_to_index_.size()) || id_to_index_[id] < 0) {
    throw Error("unknown stratum id " + std::to_string(id));
  }
  return strata_[static_cast<size_t>(id_to_index_[id])];
}

int Stratification::rank_of_dim(int dim) const {
  const auto it = std::find(active_dims_.begin(), active_dims_.end(), dim);
  if (it == active_dims_.end()) throw Error("dimension not active in stratification");
  return static_cast<int>(it - active_dims_.begin());
}

int Stratification::rank_of(int stratum_id) const { return rank_of_dim(by_id(stratum_id).dim()); }

double Stratification::skeleton_distance(const Vec& x, int j) const {
  double best = kEmptySetDistance;
  bool any = false;
  for (const auto& s : strata_) {
    if (s.dim() > j) continue;
    const double d = s.distance(x);
    best = any ? std::min(best, d) : d;
    any = true;
  }
  return any ? best : kEmptySetDistance;
}

int Stratification::containing_stratum(const Vec& x) const {
  for (const auto& s : strata_) {
    if (s.contains(x)) return s.id();
  }
  return -1;
}

std::vector<double> Stratification::partition_violation(int n_per_axis) const {
  const int d = ambient_dim();
  std::vector<int64_t> idx(static_cast<size_t>(d), 0);
  Vec x(d);
  while (true) {
    for (int i = 0; i < d; ++i) {
      const double t = (n_per_axis == 1) ? 0.5
                                         : static_cast<double>(idx[static_cast<size_t>(i)]) /
                                               static_cast<double>(n_per_axis - 1);
      x[i] = domain_.lo[i] + t * (domain_.hi[i] - domain_.lo[i]);
    }
    int claims = 0;
    for (const auto& s : strata_) {
      if (s.contains(x)) ++claims;
    }
    if (claims != 1) return std::vector<double>(x.data(), x.data() + d);
    int axis = 0;
    while (axis < d) {
      if (++idx[static_cast<size_t>(axis)] < n_per_axis) break;
      idx[static_cast<size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == d) break;
  }
  return {};
}

bool Stratification::boundary_condition_holds(int samples_per_stratum, uint64_t seed,
                                              std::string* diag) const {
  // For each ordered pair (X, X'): if some sampled point of X lies in the
  // closure of X' then every sampled point must (X subset of the frontier).
  Rng rng(seed);
  const double tol = 1e-9;
  std::vector<std::vector<Vec>> samples(strata_.size());
  for (size_t i = 0; i < strata_.size(); ++i) {
    const int n = strata_[i].dim() == 0 ? 1 : samples_per_stratum;
    for (int k = 0; k < n; ++k) samples[i].push_back(strata_[i].sample_point(rng));
  }
  for (size_t a = 0; a < strata_.size(); ++a) {
    for (size_t b = 0; b < strata_.size(); ++b) {
      if (a == b) continue;
      int touching = 0;
      for (const auto& y : samples[a]) {
        if (strata_[b].distance(y) <= tol) ++touching;
      }
      if (touching != 0 && touching != static_cast<int>(samples[a].size())) {
        if (diag != nullptr) {
          *diag = "boundary condition fails for pair (" + std::to_string(strata_[a].id()) +
                  ", " + std::to_string(strata_[b].id()) + ")";
        }
        return false;
      }
    }
  }
  return true;
}

std::string Stratification::describe_json() const {
  ordered_json j;
  j["ambient_dim"] = ambient_dim();
  j["domain"] = {{"lo", std::vector<double>(domain_.lo.data(), domain_.lo.data() + domain_.lo.size())},
                 {"hi", std::vector<double>(domain_.hi.data(), domain_.hi.data() + domain_.hi.size())}};
  j["R"] = R();
  j["active_dims"] = active_dims_;
  ordered_json arr = ordered_json::array();
  for (const auto& s : strata_) {
    ordered_json sj;
    sj["id"] = s.id();
    sj["kind"] = kind_name(s.kind());
    sj["dim"] = s.dim();
    sj["rank"] = rank_of(s.id());
    switch (s.kind()) {
      case StratumKind::Point: {
        const auto& p = s.point_data();
        sj["z"] = std::vector<double>(p.z.data(), p.z.data() + p.z.size());
        break;
      }
      case StratumKind::Segment: {
        const auto& g = s.segment_data();
        sj["anchor"] = std::vector<double>(g.anchor.data(), g.anchor.data() + g.anchor.size());
        sj["dir"] = std::vector<double>(g.dir.data(), g.dir.data() + g.dir.size());
        sj["t_lo"] = g.t_lo;
        sj["t_hi"] = g.t_hi;
        sj["open_lo"] = g.open_lo;
        sj["open_hi"] = g.open_hi;
        break;
      }
      case StratumKind::Affine: {
        const auto& g = s.affine_data();
        sj["anchor"] = std::vector<double>(g.anchor.data(), g.anchor.data() + g.anchor.size());
        std::vector<std::vector<double>> cols;
        for (int c = 0; c < g.basis.cols(); ++c) {
          cols.emplace_back(g.basis.col(c).data(), g.basis.col(c).data() + g.basis.rows());
        }
        sj["basis"] = cols;
        break;
      }
      case StratumKind::CircleArc: {
        const auto& g = s.circle_data();
        sj["center"] = std::vector<double>(g.center.data(), g.center.data() + g.center.size());
        sj["radius"] = g.radius;
        sj["full"] = g.full;
        if (!g.full) {
          sj["theta_lo"] = g.theta_lo;
          sj["theta_hi"] = g.theta_hi;
          sj["open_lo"] = g.open_lo;
          sj["open_hi"] = g.open_hi;
        }
        break;
      }
      case StratumKind::Region: {
        const auto& g = s.region_data();
        sj["lo"] = std::vector<double>(g.lo.data(), g.lo.data() + g.lo.size());
        sj["hi"] = std::vector<double>(g.hi.data(), g.hi.data() + g.hi.size());
        sj["open_lo"] = g.open_lo;
        sj["open_hi"] = g.open_hi;
        break;
      }
    }
    arr.push_back(std::move(sj));
  }
  j["strata"] = std::move(arr);
  return j.dump(2);
}

namespace {

Vec to_vec(const ordered_json& j) {
  Vec v(static_cast<int>(j.size()));
  for (int i = 0; i < v.size(); ++i) v[i] = j[static_cast<size_t>(i)].get<double>();
  return v;
}

}  // namespace

Stratification Stratification::from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("stratification json: ") + e.what());
  }
  try {
    Box box{to_vec(j.at("domain").at("lo")), to_vec(j.at("domain").at("hi"))};
    std::vector<Stratum> strata;
    for (const auto& sj : j.at("strata")) {
      const int id = sj.at("id").get<int>();
      const std::string kind = sj.at("kind").get<std::string>();
      if (kind == "point") {
        strata.push_back(Stratum::point(id, to_vec(sj.at("z"))));
      } else if (kind == "segment") {
        strata.push_back(Stratum::segment(id, to_vec(sj.at("anchor")), to_vec(sj.at("dir")),
                                          sj.at("t_lo").get<double>(), sj.at("t_hi").get<double>(),
                                          sj.at("open_lo").get<bool>(), sj.at("open_hi").get<bool>()));
      } else if (kind == "affine") {
        const auto& cols = sj.at("basis");
        Vec anchor = to_vec(sj.at("anchor"));
        Mat basis(anchor.size(), static_cast<int>(cols.size()));
        for (int c = 0; c < basis.cols(); ++c) basis.col(c) = to_vec(cols[static_cast<size_t>(c)]);
        strata.push_back(Stratum::affine(id, std::move(anchor), std::move(basis)));
      } else if (kind == "circle_arc") {
        if (sj.at("full").get<bool>()) {
          strata.push_back(Stratum::circle(id, to_vec(sj.at("center")), sj.at("radius").get<double>()));
        } else {
          strata.push_back(Stratum::circle_arc(id, to_vec(sj.at("center")), sj.at("radius").get<double>(),
                                               sj.at("theta_lo").get<double>(), sj.at("theta_hi").get<double>(),
                                               sj.at("open_lo").get<bool>(), sj.at("open_hi").get<bool>()));
        }
      } else if (kind == "region") {
        strata.push_back(Stratum::region(id, to_vec(sj.at("lo")), to_vec(sj.at("hi")),
                                         sj.at("open_lo").get<std::vector<bool>>(),
                                         sj.at("open_hi").get<std::vector<bool>>()));
      } else {
        throw ParseError("unknown stratum kind: " + kind);
      }
    }
    return Stratification(std::move(strata), std::move(box));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("stratification json: ") + e.what());
  }
}

}  // namespace strata
