#include "sfwm/model.hpp"

namespace sfwm {

std::vector<std::string> preset_names() {
  return {"rb87_1529_780", "rb87_1367_780", "rb85_776_780_chaneliere",
          "rb87_warm_tu"};
}

std::pair<LevelScheme, DriveConfig> preset(const std::string& name) {
  LevelScheme s;
  DriveConfig d;  // defaults: Omega_c = Omega_d = 1, Delta1 = -50, Delta2 = 0
  // Atomic masses are external physical constants (CODATA-class values), not
  // model parameters: 87Rb 1.4432e-25 kg, 85Rb 1.4100e-25 kg.
  if (name == "rb87_1529_780") {
    s = {name, 0.95, 1.00, 0.30, 0.05, 0.5, 1.0, 0.5, 0.2,
         1529e-9, 780e-9, 795e-9, 1476e-9, 1.4432e-25};
  } else if (name == "rb87_1367_780") {
    s = {name, 0.95, 1.00, 0.17, 0.33, 0.5, 1.0, 0.5, 0.5,
         1367e-9, 780e-9, 795e-9, 1324e-9, 1.4432e-25};
  } else if (name == "rb85_776_780_chaneliere") {
    s = {name, 1.00, 1.00, 0.28, 0.28, 1.0 / 28, 1.0, 28.0 / 45, 1.0 / 45,
         776e-9, 780e-9, 780e-9, 776e-9, 1.4100e-25};
  } else if (name == "rb87_warm_tu") {
    // Warm-vapor configuration: same level structure as rb87_1529_780 with
    // the stronger drive used for Doppler-broadened runs.
    s = {name, 0.95, 1.00, 0.30, 0.05, 0.5, 1.0, 0.5, 0.2,
         1529e-9, 780e-9, 795e-9, 1476e-9, 1.4432e-25};
    d.omega_c = 5.0;
    d.omega_d = 5.0;
    d.delta1 = -500.0;
    d.od = 1000.0;
  } else {
    std::string msg = "unknown preset '" + name + "'; valid presets:";
    for (const auto& p : preset_names()) msg += " " + p;
    throw std::invalid_argument(msg);
  }
  return {s, d};
}

std::map<std::string, double> decoherence_table(const LevelScheme& s) {
  return {{"21", s.g21()}, {"31", s.g31()}, {"32", s.g32()},
          {"41", s.g41()}, {"42", s.g42()}, {"43", s.g43()}};
}

}  // namespace sfwm
