#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace prqpe {

// Monotonicity-preserving piecewise-cubic Hermite interpolant
// (Fritsch-Carlson slopes). Exact at knots; reproduces linear data exactly.
class PchipInterpolator {
  public:
    PchipInterpolator() = default;
    PchipInterpolator(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;
    double x_min() const { return x_.front(); }
    double x_max() const { return x_.back(); }

  private:
    std::vector<double> x_, y_, d_;
};

enum class SmmSetting { accuracy, speed };

std::string to_string(SmmSetting s);
SmmSetting smm_setting_from_string(const std::string& s);

struct SmmQuery {
    double alpha_rus = 0.0;
    double c_smm_clocks = 0.0;
};

// Angle-dependent performance tables of the analog-rotation protocol, one
// curve per (setting, physical error rate), interpolated over log(theta).
class SmmCalibration {
  public:
    struct Curve {
        PchipInterpolator alpha_rus;
        PchipInterpolator c_smm;
        double theta_min = 0.0, theta_max = 0.0;
    };

    void add_curve(SmmSetting setting, double p_ph, const std::vector<double>& theta,
                   const std::vector<double>& alpha_rus, const std::vector<double>& c_smm);

    bool has_curve(SmmSetting setting, double p_ph) const;

    // Out-of-range theta throws unless clamping to the endpoint values is
    // requested.
    SmmQuery query(SmmSetting setting, double p_ph, double theta, bool clamp = false) const;

    const std::string& provenance() const { return provenance_; }
    void set_provenance(std::string p) { provenance_ = std::move(p); }

  private:
    const Curve& find(SmmSetting setting, double p_ph) const;
    std::map<std::pair<int, double>, Curve> curves_;
    std::string provenance_;
};

// CSV with header `setting,p_ph,theta,alpha_rus,c_smm_clocks`; rows grouped
// per curve with theta strictly increasing; '#' lines are comments (the
// first one is kept as provenance); at least 4 samples per curve.
SmmCalibration load_calibration(std::istream& in);
SmmCalibration load_calibration_file(const std::string& path);

}  // namespace prqpe
