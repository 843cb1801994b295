#pragma once

#include <memory>
#include <vector>

#include "ses/spectra.hpp"

namespace ses {

// How level energies depend on the volume.
enum class VolumeScaling {
  none,  // fixed levels, zero pressure
  box,   // e ~ V^(-2/3): de/dV = -(2/3) e / V
};

// Weight of the z-particle sector in the family mode: Q_z = w_z Q_1^z.
enum class Counting {
  distinguishable,  // w_z = 1 (geometric series in the fugacity)
  boltzmann,        // w_z = 1/z!
};

// Region of (b, mu) the model is certified for.
struct OperatingBox {
  double b_min = 0.0;
  double b_max = kInfinity;
  double mu_max = 0.0;
};

struct GrandPoint {
  double b = 0.0;
  double mu = 0.0;
  double log_partition = 0.0;
  double amount = 0.0;
  double energy = 0.0;
  double entropy = 0.0;
  double pressure = 0.0;
  double euler = 0.0;  // Hill (Euler) free energy pV - kT lnQ
  double amount_variance = 0.0;
};

class GrandModel {
 public:
  // Sector z uses sectors[z - 1]; the z = 0 sector is the empty system.
  static GrandModel from_sectors(std::vector<std::shared_ptr<const CanonicalModel>> sectors,
                                 double volume, VolumeScaling scaling, OperatingBox box);
  // Independent identical particles with single-particle model `single`;
  // z_max chosen so the neglected grand mass is below tail_tolerance over the box.
  static GrandModel independent(std::shared_ptr<const CanonicalModel> single, Counting counting,
                                double volume, VolumeScaling scaling, OperatingBox box,
                                double tail_tolerance = kMaxTailBound);

  GrandModel at_volume(double volume) const;

  int z_max() const { return z_max_; }
  double volume() const { return volume_; }
  double tail_bound() const { return tail_bound_; }
  const OperatingBox& box() const { return box_; }
  VolumeScaling scaling() const { return scaling_; }

  GrandPoint properties(double b, double mu) const;

 private:
  struct Sector {
    double log_partition;
    double energy;
  };
  Sector sector(int z, double b) const;

  std::vector<std::shared_ptr<const CanonicalModel>> sectors_;
  std::shared_ptr<const CanonicalModel> single_;
  Counting counting_ = Counting::distinguishable;
  bool family_ = false;
  int z_max_ = 0;
  double volume_ = 1.0;
  double tail_bound_ = 0.0;
  double tail_tolerance_ = kMaxTailBound;
  VolumeScaling scaling_ = VolumeScaling::none;
  OperatingBox box_;
};

// Throws OperatingBoxExceeded outside the model's box.
GrandPoint grand_properties(const GrandModel& model, double b, double mu);

// mu with n(b, mu) = n_target. Throws AmountOutOfRange.
double fugacity_of_amount(const GrandModel& model, double b, double amount);

}  // namespace ses
