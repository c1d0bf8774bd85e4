#include "kdsqnm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

namespace kdsqnm {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json result_to_json_obj(const QnmResult& r) {
  nlohmann::json j{
      {"m", r.m},
      {"l", r.l},
      {"k", r.k},
      {"a", r.a},
      {"order", r.order_J},
      {"omega", {{"re", r.omega.real()}, {"im", r.omega.imag()}}},
      {"residual", r.residual},
      {"iterations", r.iterations},
      {"seed", {{"re", r.seed.real()}, {"im", r.seed.imag()}}},
      {"converged", r.converged},
      {"flags", r.flags},
  };
  if (!r.per_order.empty()) {
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& [J, w] : r.per_order)
      hist.push_back({{"order", J}, {"re", w.real()}, {"im", w.imag()}});
    j["history"] = std::move(hist);
  }
  return j;
}

}  // namespace

std::vector<double> parse_range(const std::string& text) {
  double start = 0.0, step = 0.0, stop = 0.0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &step, &stop, &extra) != 3)
    throw std::invalid_argument("range must have the form start:step:stop, got '" + text + "'");
  if (!(step > 0.0) || stop < start)
    throw std::invalid_argument("range '" + text + "' is empty or has nonpositive step");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double v = start + i * step;
    if (v > stop + 0.5 * step) break;
    grid.push_back(std::min(v, stop));
  }
  if (grid.empty()) throw std::invalid_argument("range '" + text + "' is empty");
  return grid;
}

std::vector<int> parse_int_range(const std::string& text) {
  int lo = 0, hi = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), "%d:%d%c", &lo, &hi, &extra) == 2) {
    if (hi < lo) throw std::invalid_argument("integer range '" + text + "' is empty");
    std::vector<int> v;
    for (int i = lo; i <= hi; ++i) v.push_back(i);
    return v;
  }
  if (std::sscanf(text.c_str(), "%d%c", &lo, &extra) == 1) return {lo};
  throw std::invalid_argument("expected an integer or lo:hi, got '" + text + "'");
}

void write_csv_header(std::ostream& os) {
  os << "m,l,k,a,order,re_omega,im_omega,residual,iterations,flags\n";
}

void write_csv_row(std::ostream& os, const QnmResult& r) {
  os << r.m << ',' << r.l << ',' << r.k << ',' << fmt17(r.a) << ',' << r.order_J << ','
     << fmt17(r.omega.real()) << ',' << fmt17(r.omega.imag()) << ',' << fmt17(r.residual) << ','
     << r.iterations << ',' << join_flags(r.flags) << '\n';
}

void sort_results(std::vector<QnmResult>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const QnmResult& x, const QnmResult& y) {
    return std::tuple(x.m, x.l, x.k, x.a) < std::tuple(y.m, y.l, y.k, y.a);
  });
}

std::string results_to_json(const std::vector<QnmResult>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const QnmResult& r : rows) arr.push_back(result_to_json_obj(r));
  return arr.dump(2);
}

std::string branches_to_json(const std::vector<ContinuationBranch>& branches) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ContinuationBranch& b : branches) {
    nlohmann::json points = nlohmann::json::array();
    for (const QnmResult& r : b.points) points.push_back(result_to_json_obj(r));
    nlohmann::json jb{{"points", std::move(points)}, {"truncated", b.truncated}};
    if (b.truncated) jb["failed_at"] = b.failed_at;
    if (!b.points.empty()) {
      jb["m"] = b.points.front().m;
      jb["l"] = b.points.front().l;
      jb["k"] = b.points.front().k;
    }
    arr.push_back(std::move(jb));
  }
  return arr.dump(2);
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string s;
  for (size_t i = 0; i < flags.size(); ++i) {
    if (i) s += ';';
    s += flags[i];
  }
  return s;
}

}  // namespace kdsqnm
