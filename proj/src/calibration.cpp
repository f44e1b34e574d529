#include "prqpe/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "prqpe/errors.hpp"

namespace prqpe {

PchipInterpolator::PchipInterpolator(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw ValidationError("pchip: need at least two knots");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1])) throw ValidationError("pchip: knots must be strictly increasing");

    std::vector<double> h(n - 1), slope(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        slope[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (slope[i - 1] * slope[i] <= 0.0) {
            d_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d_[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
        }
    }
    auto endpoint = [&](double h0, double h1, double s0, double s1) {
        double d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
        if (d * s0 <= 0.0)
            d = 0.0;
        else if (s0 * s1 < 0.0 && std::abs(d) > 3.0 * std::abs(s0))
            d = 3.0 * s0;
        return d;
    };
    if (n == 2) {
        d_[0] = d_[1] = slope[0];
    } else {
        d_[0] = endpoint(h[0], h[1], slope[0], slope[1]);
        d_[n - 1] = endpoint(h[n - 2], h[n - 3], slope[n - 2], slope[n - 3]);
    }
}

double PchipInterpolator::operator()(double x) const {
    if (x < x_.front() || x > x_.back()) throw ValidationError("pchip: query outside knot range");
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    std::size_t i = it == x_.end() ? x_.size() - 2 : static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return y_[i] * (2 * t3 - 3 * t2 + 1) + h * d_[i] * (t3 - 2 * t2 + t) +
           y_[i + 1] * (-2 * t3 + 3 * t2) + h * d_[i + 1] * (t3 - t2);
}

std::string to_string(SmmSetting s) { return s == SmmSetting::accuracy ? "accuracy" : "speed"; }

SmmSetting smm_setting_from_string(const std::string& s) {
    if (s == "accuracy") return SmmSetting::accuracy;
    if (s == "speed") return SmmSetting::speed;
    throw ValidationError("calibration: unknown setting '" + s + "'");
}

void SmmCalibration::add_curve(SmmSetting setting, double p_ph, const std::vector<double>& theta,
                               const std::vector<double>& alpha_rus,
                               const std::vector<double>& c_smm) {
    if (theta.size() < 4)
        throw ValidationError("calibration: at least 4 samples per curve required");
    for (std::size_t i = 0; i < theta.size(); ++i) {
        if (theta[i] <= 0) throw ValidationError("calibration: theta samples must be positive");
        if (alpha_rus[i] <= 0 || c_smm[i] <= 0)
            throw ValidationError("calibration: alpha_rus and c_smm must be positive");
        if (i > 0 && theta[i] <= theta[i - 1])
            throw ValidationError("calibration: theta samples must be strictly increasing");
    }
    std::vector<double> logt(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) logt[i] = std::log(theta[i]);
    Curve c;
    c.alpha_rus = PchipInterpolator(logt, alpha_rus);
    c.c_smm = PchipInterpolator(logt, c_smm);
    c.theta_min = theta.front();
    c.theta_max = theta.back();
    curves_[{static_cast<int>(setting), p_ph}] = std::move(c);
}

bool SmmCalibration::has_curve(SmmSetting setting, double p_ph) const {
    return curves_.count({static_cast<int>(setting), p_ph}) > 0;
}

const SmmCalibration::Curve& SmmCalibration::find(SmmSetting setting, double p_ph) const {
    const auto it = curves_.find({static_cast<int>(setting), p_ph});
    if (it == curves_.end())
        throw ValidationError("calibration: no curve for setting=" + to_string(setting) +
                              ", p_ph=" + std::to_string(p_ph));
    return it->second;
}

SmmQuery SmmCalibration::query(SmmSetting setting, double p_ph, double theta, bool clamp) const {
    if (theta <= 0) throw ValidationError("calibration: query theta must be positive");
    const Curve& c = find(setting, p_ph);
    if (theta < c.theta_min || theta > c.theta_max) {
        if (!clamp)
            throw ValidationError("calibration: theta " + std::to_string(theta) +
                                  " outside curve range [" + std::to_string(c.theta_min) + ", " +
                                  std::to_string(c.theta_max) + "] (enable clamping to proceed)");
        theta = std::clamp(theta, c.theta_min, c.theta_max);
    }
    const double lt = std::log(theta);
    return {c.alpha_rus(lt), c.c_smm(lt)};
}

SmmCalibration load_calibration(std::istream& in) {
    SmmCalibration cal;
    std::string line;
    std::size_t lineno = 0;

    struct Group {
        std::vector<double> theta, alpha, clocks;
    };
    std::map<std::pair<std::string, double>, Group> groups;
    std::vector<std::pair<std::string, double>> order;

    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        if (line[0] == '#') {
            if (cal.provenance().empty()) {
                std::string p = line.substr(1);
                const auto start = p.find_first_not_of(" \t");
                cal.set_provenance(start == std::string::npos ? "" : p.substr(start));
            }
            continue;
        }
        if (!header_seen) {
            if (line.rfind("setting,", 0) != 0)
                throw ParseError("calibration: expected header 'setting,p_ph,theta,alpha_rus,c_smm_clocks'",
                                 lineno);
            header_seen = true;
            continue;
        }
        std::istringstream ss(line);
        std::string setting, p_ph_s, theta_s, alpha_s, clocks_s;
        if (!std::getline(ss, setting, ',') || !std::getline(ss, p_ph_s, ',') ||
            !std::getline(ss, theta_s, ',') || !std::getline(ss, alpha_s, ',') ||
            !std::getline(ss, clocks_s))
            throw ParseError("calibration: malformed row", lineno);
        smm_setting_from_string(setting);  // validates
        const std::pair<std::string, double> key{setting, std::stod(p_ph_s)};
        auto& grp = groups[key];
        if (grp.theta.empty()) order.push_back(key);
        grp.theta.push_back(std::stod(theta_s));
        grp.alpha.push_back(std::stod(alpha_s));
        grp.clocks.push_back(std::stod(clocks_s));
    }
    if (!header_seen) throw ParseError("calibration: missing header", lineno);

    for (const auto& key : order) {
        const auto& grp = groups.at(key);
        cal.add_curve(smm_setting_from_string(key.first), key.second, grp.theta, grp.alpha,
                      grp.clocks);
    }
    return cal;
}

SmmCalibration load_calibration_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("calibration: cannot open '" + path + "'");
    SmmCalibration cal = load_calibration(in);
    if (cal.provenance().empty()) cal.set_provenance(path);
    return cal;
}

}  // namespace prqpe
