#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace iernn {

struct PlotRun
{
  std::string label;     // legend / figure title
  std::string csv_file;  // relative to the script's directory
};

/// Emits a standalone matplotlib script. Each run gets one figure with five
/// panels: end-effector path against the reference, joint velocities, joint
/// accelerations, position error components and RMS error. With more than
/// one run an extra figure overlays the RMS traces. Columns are located by
/// header name, so any log written by write_log_csv works.
void write_plot_script(const std::vector<PlotRun>& runs, const std::string& title,
                       std::ostream& os);

}  // namespace iernn
