#include "bitorus/bitorus.h"

#include <cstring>
#include <iostream>
#include <string>

#include "core/acceptance.hpp"
#include "core/io.hpp"
#include "core/limits.hpp"

namespace {

using namespace bitorus;

thread_local std::string g_last_error;

bt_status status_of(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return BT_EINVAL;
    case Errc::domain: return BT_EDOMAIN;
    case Errc::not_in_px: return BT_ENOTPX;
    case Errc::window: return BT_EWINDOW;
    case Errc::no_convergence: return BT_ENOCONV;
    case Errc::diagnostics: return BT_EDIAG;
    case Errc::io: return BT_EIO;
  }
  return BT_EINTERNAL;
}

template <class Fn>
bt_status guarded(Fn&& fn) {
  try {
    fn();
    return BT_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return BT_EINTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return BT_EINTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require_arg(bool ok, const char* what) {
  if (!ok) fail(Errc::invalid_argument, what);
}

}  // namespace

struct bt_measure2 {
  bitorus::AtomicMeasure2D value;
};

struct bt_law {
  bitorus::TransformLaw value;
};

struct bt_table {
  bitorus::MomentTable2D value;
};

extern "C" {

const char* bt_version(void) { return "1.0.0"; }

const char* bt_last_error(void) { return g_last_error.c_str(); }

void bt_string_free(char* s) { delete[] s; }
void bt_measure2_free(bt_measure2* m) { delete m; }
void bt_law_free(bt_law* l) { delete l; }
void bt_table_free(bt_table* t) { delete t; }

bt_status bt_measure2_from_json(const char* json_text, bt_measure2** out) {
  return guarded([&] {
    require_arg(json_text && out, "null argument");
    *out = new bt_measure2{measure2_from_json(json_text)};
  });
}

bt_status bt_measure2_to_json(const bt_measure2* m, char** out_json) {
  return guarded([&] {
    require_arg(m && out_json, "null argument");
    *out_json = dup_string(measure2_to_json(m->value));
  });
}

bt_status bt_measure2_atom_count(const bt_measure2* m, size_t* out) {
  return guarded([&] {
    require_arg(m && out, "null argument");
    *out = m->value.size();
  });
}

bt_status bt_measure2_moment(const bt_measure2* m, long p, long q, double* re, double* im) {
  return guarded([&] {
    require_arg(m && re && im, "null argument");
    Complex v = m->value.moment(p, q);
    *re = v.real();
    *im = v.imag();
  });
}

bt_status bt_measure2_in_px_class(const bt_measure2* m, int* out) {
  return guarded([&] {
    require_arg(m && out, "null argument");
    *out = m->value.in_class_px() ? 1 : 0;
  });
}

bt_status bt_measure2_eval(const bt_measure2* m, const char* which, double z_re, double z_im,
                           double w_re, double w_im, double value[2], char component[3]) {
  return guarded([&] {
    require_arg(m && which && value && component, "null argument");
    Complex z{z_re, z_im}, w{w_re, w_im};
    const AtomicMeasure2D& mu = m->value;
    std::string name = which;
    Complex v;
    bool two_variable = true;
    if (name == "psi") {
      v = psi2(mu, z, w);
    } else if (name == "h") {
      v = h2(mu, z, w);
    } else if (name == "sigma") {
      v = sigma_pointwise(mu, z, w, DomainWindow{});
    } else if (name == "sigma_op") {
      v = sigma_op_pointwise(mu, z, w);
    } else if (name == "s") {
      v = s_transform(mu, z, w);
    } else if (name == "psi1" || name == "psi2") {
      v = psi1(mu.marginal(name == "psi1" ? 1 : 2), z);
      two_variable = false;
    } else if (name == "eta1" || name == "eta2") {
      v = eta(mu.marginal(name == "eta1" ? 1 : 2), z);
      two_variable = false;
    } else if (name == "eta_inv1" || name == "eta_inv2") {
      v = eta_inv_pointwise(mu.marginal(name == "eta_inv1" ? 1 : 2), z, DomainWindow{});
      two_variable = false;
    } else {
      fail(Errc::invalid_argument, "unknown transform \"" + name + "\"");
    }
    value[0] = v.real();
    value[1] = v.imag();
    const char* tag =
        two_variable ? component_tag(classify_component(z, w))
                     : (std::abs(z) < 1.0 ? "DD" : "UU");
    std::memcpy(component, tag, 3);
  });
}

bt_status bt_measure2_sigma_series(const bt_measure2* m, int order, double* coeffs) {
  return guarded([&] {
    require_arg(m && coeffs && order >= 0, "null argument or negative order");
    Series2 s = sigma_series(m->value, order);
    std::size_t k = 0;
    for (int p = 0; p <= order; ++p)
      for (int q = 0; q <= order; ++q) {
        coeffs[k++] = s.at(p, q).real();
        coeffs[k++] = s.at(p, q).imag();
      }
  });
}

bt_status bt_law_from_measure(const bt_measure2* m, bt_law** out) {
  return guarded([&] {
    require_arg(m && out, "null argument");
    *out = new bt_law{make_transform_law(m->value)};
  });
}

bt_status bt_law_convolve(const bt_law* a, const bt_law* b, bt_law** out) {
  return guarded([&] {
    require_arg(a && b && out, "null argument");
    *out = new bt_law{bifree_convolve(a->value, b->value)};
  });
}

bt_status bt_law_power(const bt_law* a, long n, bt_law** out) {
  return guarded([&] {
    require_arg(a && out, "null argument");
    *out = new bt_law{bifree_power(a->value, n)};
  });
}

bt_status bt_law_rotate(const bt_law* a, double angle1, double angle2, bt_law** out) {
  return guarded([&] {
    require_arg(a && out, "null argument");
    *out = new bt_law{rotate_law(a->value, unit(angle1), unit(angle2))};
  });
}

bt_status bt_law_from_levy_json(const char* json_text, bt_law** out) {
  return guarded([&] {
    require_arg(json_text && out, "null argument");
    *out = new bt_law{id_law(levy_from_json(json_text))};
  });
}

bt_status bt_law_window(const bt_law* l, double* out_radius) {
  return guarded([&] {
    require_arg(l && out_radius, "null argument");
    *out_radius = l->value.window_r;
  });
}

bt_status bt_law_moments(const bt_law* l, int order, int grid_size, double radius, bt_table** out,
                         char** diagnostics_json) {
  return guarded([&] {
    require_arg(l && out, "null argument");
    EvaluationGrid grid;
    if (grid_size > 0) grid.size = grid_size;
    if (radius > 0.0) grid.radius_z = grid.radius_w = radius;
    ExtractionDiagnostics diag;
    *out = new bt_table{extract_moments(l->value, grid, order, &diag)};
    if (diagnostics_json) *diagnostics_json = dup_string(diag.to_json());
  });
}

bt_status bt_table_order(const bt_table* t, int* out) {
  return guarded([&] {
    require_arg(t && out, "null argument");
    *out = t->value.order();
  });
}

bt_status bt_table_get(const bt_table* t, long p, long q, double* re, double* im) {
  return guarded([&] {
    require_arg(t && re && im, "null argument");
    Complex v = t->value.at(p, q);
    *re = v.real();
    *im = v.imag();
  });
}

bt_status bt_table_to_csv(const bt_table* t, char** out_csv) {
  return guarded([&] {
    require_arg(t && out_csv, "null argument");
    *out_csv = dup_string(t->value.to_csv());
  });
}

bt_status bt_limit_demo(const char* example, double rate, const long* levels, size_t n_levels,
                        int order, int grid_size, double* errors_out) {
  return guarded([&] {
    require_arg(example && levels && errors_out && n_levels > 0, "null argument");
    std::string name = example;
    std::function<AtomicMeasure2D(long)> row;
    TransformLaw target = id_law(normal_law_data(0.0));
    if (name == "3.5" || name == "normal") {
      row = [rate](long n) { return normal_array_measure(rate, n); };
      target = id_law(normal_law_data(rate));
    } else if (name == "3.6" || name == "poisson") {
      AtomicMeasure2D jump = default_poisson_jump();
      row = [rate, jump](long n) { return poisson_array_measure(rate, jump, n); };
      target = id_law(poisson_law_data(rate, jump));
    } else {
      fail(Errc::invalid_argument, "unknown demo \"" + name + "\" (use 3.5 or 3.6)");
    }
    std::vector<long> lv(levels, levels + n_levels);
    std::vector<SweepRow> rows = limit_sweep(row, lv, target, order, grid_size);
    for (std::size_t i = 0; i < rows.size(); ++i) errors_out[i] = rows[i].max_error;
  });
}

bt_status bt_haar_check(const bt_measure2* m, const long* levels, size_t n_levels, int order,
                        int grid_size, double* rows_out) {
  return guarded([&] {
    require_arg(m && levels && rows_out && n_levels > 0, "null argument");
    std::vector<long> lv(levels, levels + n_levels);
    AtomicMeasure2D mu = m->value;
    std::vector<HaarCheckRow> rows = haar_limit_check([mu](long) { return mu; }, lv,
                                                      [](long n) { return n; }, order, grid_size);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows_out[5 * i + 0] = rows[i].m11_pow;
      rows_out[5 * i + 1] = rows[i].m1_pow;
      rows_out[5 * i + 2] = rows[i].m2_pow;
      rows_out[5 * i + 3] = rows[i].envelope;
      rows_out[5 * i + 4] = rows[i].max_offcenter_moment;
    }
  });
}

bt_status bt_selftest(int* failures) {
  return guarded([&] {
    require_arg(failures != nullptr, "null argument");
    *failures = bitorus::acceptance::run_all(std::cout);
  });
}

}  // extern "C"
