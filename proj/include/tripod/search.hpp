#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tripod/cluster.hpp"
#include "tripod/model.hpp"

namespace tripod {

// Annealing schedule and grid geometry for one search run. The temperature
// is multiplied by coolingRate and the measure penalty by penaltyGrowth
// after every sweep; a sweep proposes one relabel per current boundary
// pixel. Runs are single-threaded and fully determined by (volumes, params,
// init choice).
struct SearchParams {
  double R = 6.0;
  int resolution = 512;
  std::uint64_t seed = 1;
  double initialTemperature = 1e-4;
  double coolingRate = 0.9;
  int sweeps = 80;
  double measurePenalty = 10.0;
  double penaltyGrowth = 1.06;
};

enum class SearchInit { model, random };

// Line-fit summary of a three-cell cluster: total-least-squares lines
// through the per-pair interface edges, the sector angles between the
// fitted rays at their common junction (degrees; the rays sorted by
// direction, so the three gaps always sum to 360 and the order is
// independent of the labeling's chirality), the worst per-pair RMS distance
// of interface edges to their line in pixel units, and the per-pair ratio
// of estimated interface area to the tripod value at the measures of the
// cluster. Clusters without three usable interfaces (or whose measures
// cannot be inverted) get degenerate = true and a note instead.
struct FlatnessReport {
  std::array<double, 3> angles = {0.0, 0.0, 0.0};
  double flatnessResidual = 0.0;
  std::array<double, 3> areasVsModel = {0.0, 0.0, 0.0};
  bool degenerate = false;
  std::string note;
};

// Outcome of one annealing run. The cluster is the best snapshot across
// sweeps, where snapshots are scored with the final-sweep penalty weight so
// scores from different sweeps are comparable; achievedPerimeter and
// achievedMeasures are final-pass estimator values on that snapshot,
// gapToModel = achievedPerimeter - model_profile(volumes).
// measureDrift is the l1 distance of achievedMeasures to the target and is
// compared against measureTolerance = 2 / resolution: drift beyond five
// tolerances marks the run as failed (converged = false) with the reason in
// diagnostics, never silently. objectiveTrace holds the penalized objective
// after every sweep (entry 0 is the initial cluster) and bestObjectiveTrace
// its running minimum, which is non-increasing by construction.
struct SearchResult {
  GridCluster cluster;
  double achievedPerimeter = 0.0;
  std::array<double, 3> achievedMeasures = {0.0, 0.0, 0.0};
  double gapToModel = 0.0;
  std::array<double, 3> tripleJunctionAngles = {0.0, 0.0, 0.0};
  double interfaceFlatnessResidual = 0.0;
  bool converged = false;
  double measureDrift = 0.0;
  double measureTolerance = 0.0;
  std::string diagnostics;
  std::vector<double> objectiveTrace;
  std::vector<double> bestObjectiveTrace;
};

// Simulated annealing over boundary-pixel relabels, minimizing the
// estimated perimeter plus measurePenalty * |measures - v|_1. init selects
// the starting cluster: the rasterized tripod at invert_volume_map(v), or
// iid random labels on macro blocks of resolution/16 pixels. Random starts
// anneal through a coarse-to-fine pyramid (halving resolution down to 64,
// then doubling back up), because domain coarsening moves boundaries by
// about one pixel per sweep; the trace then covers the sweeps of every
// level, while the returned cluster and all snapshot candidates live at
// the full resolution. Requires interior v with min entry >= 0.02.
SearchResult search(const SimplexVolume& v, const SearchParams& params,
                    SearchInit init = SearchInit::model);

FlatnessReport flatness_report(const GridCluster& c);

// Serializes everything in the result except the cluster as a JSON document
// with the field names above; byte-identical for identical results. The
// cluster itself travels in the binary/CSV grid formats.
std::string search_result_json(const SearchResult& r);

}  // namespace tripod
