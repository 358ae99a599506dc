#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "pmo/hierarchy.hpp"
#include "pmo/optimality.hpp"
#include "pmo/sosconvex.hpp"

namespace pmo {

// hand-rolled JSON writer so every floating-point value is emitted with full
// precision instead of a shortest-representation round trip
class JsonWriter {
 public:
  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(const std::string& k) {
    comma();
    quote(k);
    out_ << ": ";
    pending_value_ = true;
  }

  void value(double v) {
    comma();
    if (std::isnan(v)) {
      out_ << "null";
    } else {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.16e", v);
      out_ << buf;
    }
  }
  void value(int v) {
    comma();
    out_ << v;
  }
  void value(bool v) {
    comma();
    out_ << (v ? "true" : "false");
  }
  void value(const std::string& v) {
    comma();
    quote(v);
  }
  void value(const char* v) { value(std::string(v)); }

  void kv(const std::string& k, double v) { key(k), value(v); }
  void kv(const std::string& k, int v) { key(k), value(v); }
  void kv(const std::string& k, bool v) { key(k), value(v); }
  void kv(const std::string& k, const std::string& v) { key(k), value(v); }
  void kv(const std::string& k, const char* v) { key(k), value(v); }

  void key_vector(const std::string& k, const Eigen::VectorXd& v) {
    key(k);
    begin_array();
    for (int i = 0; i < v.size(); ++i) value(v[i]);
    end_array();
  }

  // dense row-major flattening
  void key_matrix(const std::string& k, const Eigen::MatrixXd& a) {
    key(k);
    begin_array();
    for (int r = 0; r < a.rows(); ++r)
      for (int c = 0; c < a.cols(); ++c) value(a(r, c));
    end_array();
  }

  std::string str() const { return out_.str() + "\n"; }

 private:
  void open(char c) {
    comma();
    out_ << c;
    need_comma_.push_back(false);
  }
  void close(char c) {
    need_comma_.pop_back();
    out_ << c;
    if (!need_comma_.empty()) need_comma_.back() = true;
    pending_value_ = false;
  }
  void comma() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!need_comma_.empty()) {
      if (need_comma_.back()) out_ << ", ";
      need_comma_.back() = true;
    }
  }
  void quote(const std::string& s) {
    out_ << '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ << "\\\""; break;
        case '\\': out_ << "\\\\"; break;
        case '\n': out_ << "\\n"; break;
        case '\t': out_ << "\\t"; break;
        case '\r': out_ << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\u%04x", c);
            out_ << buf;
          } else {
            out_ << c;
          }
      }
    }
    out_ << '"';
  }

  std::ostringstream out_;
  std::vector<bool> need_comma_;
  bool pending_value_ = false;
};

namespace report_detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12e", v);
  return buf;
}

inline std::string fmt_point(const Eigen::VectorXd& u) {
  std::string s = "(";
  for (int i = 0; i < u.size(); ++i) {
    if (i) s += ", ";
    s += fmt(u[i]);
  }
  return s + ")";
}

}  // namespace report_detail

inline void write_order_record(JsonWriter& w, const OrderResult& r) {
  w.begin_object();
  w.kv("k", r.k);
  w.kv("status", to_string(r.status));
  w.kv("moment_bound", r.mom_value);
  w.kv("sos_bound", r.sos_value);
  w.kv("primal_residual", r.primal_residual);
  w.kv("dual_residual", r.dual_residual);
  w.kv("gap", r.gap);
  w.kv("iterations", r.iterations);
  w.kv("certified", bool(r.certificate));
  w.kv("certificate_residual", r.certificate_residual);
  w.end_object();
}

inline void write_hierarchy_report(JsonWriter& w, const HierarchyResult& h) {
  w.begin_object();
  w.kv("converged", h.converged);
  w.kv("k_star", h.k_star);
  w.kv("value", h.value);
  w.key("flat_truncation");
  w.begin_object();
  w.kv("found", h.flat.found);
  w.kv("t", h.flat.t);
  w.kv("rank", h.flat.rank);
  w.end_object();
  w.key("orders");
  w.begin_array();
  for (const auto& r : h.orders) write_order_record(w, r);
  w.end_array();
  if (h.minimizers) {
    w.key("minimizers");
    w.begin_array();
    for (std::size_t i = 0; i < h.minimizers->atoms.size(); ++i) {
      w.begin_object();
      w.key_vector("point", h.minimizers->atoms[i]);
      w.kv("weight", h.minimizers->weights[static_cast<int>(i)]);
      w.end_object();
    }
    w.end_array();
  }
  if (!h.message.empty()) w.kv("message", h.message);
  w.end_object();
}

inline std::string hierarchy_report_text(const HierarchyResult& h) {
  using report_detail::fmt;
  std::string s;
  for (const auto& r : h.orders) {
    s += "order k=" + std::to_string(r.k) + ": status=" + to_string(r.status);
    if (r.status == SdpStatus::Optimal) {
      s += " bound=" + fmt(r.mom_value) + " sos=" + fmt(r.sos_value) +
           " iterations=" + std::to_string(r.iterations);
      s += r.certificate ? " certificate_residual=" + fmt(r.certificate_residual)
                         : " certificate=none";
    }
    s += "\n";
  }
  if (h.flat.found)
    s += "flat truncation at t=" + std::to_string(h.flat.t) + " with rank " +
         std::to_string(h.flat.rank) + "\n";
  s += h.converged ? "converged at k=" + std::to_string(h.k_star) + "\n"
                   : "not converged\n";
  s += "value: " + fmt(h.value) + "\n";
  if (h.minimizers)
    for (std::size_t i = 0; i < h.minimizers->atoms.size(); ++i)
      s += "minimizer " + std::to_string(i + 1) + ": " +
           report_detail::fmt_point(h.minimizers->atoms[i]) + " weight " +
           fmt(h.minimizers->weights[static_cast<int>(i)]) + "\n";
  if (!h.message.empty()) s += "note: " + h.message + "\n";
  return s;
}

inline void write_convex_report(JsonWriter& w, const ConvexSolve& c) {
  w.begin_object();
  w.kv("mode", "sos-convex");
  w.kv("order", c.d);
  w.kv("value", c.value);
  w.key_vector("minimizer", c.minimizer);
  w.kv("feasibility_min_eig", c.feas_min_eig);
  w.kv("jensen_gap", c.jensen_gap);
  w.key("relaxation");
  write_order_record(w, c.order);
  w.end_object();
}

inline std::string convex_report_text(const ConvexSolve& c) {
  using report_detail::fmt;
  std::string s = "sos-convex fast path, relaxation order " + std::to_string(c.d) + "\n";
  s += "value: " + fmt(c.value) + "\n";
  s += "minimizer: " + report_detail::fmt_point(c.minimizer) + "\n";
  s += "min eigenvalue of G at minimizer: " + fmt(c.feas_min_eig) + "\n";
  return s;
}

inline void write_audit_report(JsonWriter& w, const OptimalityReport& r) {
  w.begin_object();
  w.key_vector("point", r.point);
  w.kv("rank_g", r.rank_g);
  w.kv("ndc", r.ndc);
  w.key_vector("ndc_singular_values", r.ndc_singular_values);
  w.kv("rank_lambda", r.rank_lambda);
  w.kv("scc", r.scc);
  w.kv("sosc", r.sosc);
  w.kv("sosc_min_eig", r.sosc_min_eig);
  w.kv("stationarity_residual", r.stationarity_residual);
  w.key_matrix("lambda", r.lambda);
  w.kv("grad_det_norm", r.grad_det_norm);
  w.kv("schur_checked", r.schur_checked);
  if (r.schur_checked) {
    w.kv("schur_map_regular", r.schur_map_regular);
    w.kv("theta_residual", r.theta_residual);
  }
  w.key("warnings");
  w.begin_array();
  for (const auto& msg : r.warnings) w.value(msg);
  w.end_array();
  w.end_object();
}

inline std::string audit_report_text(const OptimalityReport& r) {
  using report_detail::fmt;
  std::string s = "point: " + report_detail::fmt_point(r.point) + "\n";
  s += "rank G(u): " + std::to_string(r.rank_g) + "\n";
  s += std::string("nondegeneracy: ") + (r.ndc ? "holds" : "fails") + "\n";
  s += "stationarity residual: " + fmt(r.stationarity_residual) + "\n";
  s += "rank of multiplier: " + std::to_string(r.rank_lambda) + "\n";
  s += std::string("strict complementarity: ") + (r.scc ? "holds" : "fails") + "\n";
  s += std::string("second order sufficiency: ") + (r.sosc ? "holds" : "fails") +
       " (min eigenvalue " + fmt(r.sosc_min_eig) + ")\n";
  if (!std::isnan(r.grad_det_norm))
    s += "|grad det G(u)|: " + fmt(r.grad_det_norm) + "\n";
  if (r.schur_checked) {
    s += std::string("reduced-map regularity: ") +
         (r.schur_map_regular ? "holds" : "fails") + "\n";
    s += "reduced stationarity residual: " + fmt(r.theta_residual) + "\n";
  }
  for (const auto& msg : r.warnings) s += "warning: " + msg + "\n";
  return s;
}

inline void write_certificate(JsonWriter& w, const QmCertificate& cert, double residual) {
  w.begin_object();
  w.kv("order", cert.k);
  w.kv("gamma", cert.gamma);
  w.kv("residual", residual);
  w.key("q0");
  w.begin_object();
  w.kv("size", static_cast<int>(cert.q0.rows()));
  w.key_matrix("values", cert.q0);
  w.end_object();
  w.key("q1");
  w.begin_object();
  w.kv("size", static_cast<int>(cert.q1.rows()));
  w.key_matrix("values", cert.q1);
  w.end_object();
  w.end_object();
}

}  // namespace pmo
