#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace evsync {

/// Fault-injection switches for sanity-checking the demo experiments: plant
/// a known bug and watch the right experiment fail.
struct DemoOptions {
  /// The flag-race algorithm forgets to set the flag (its write is replaced
  /// by a harmless read).  Solo runs then stop being atomic, which the
  /// flag-race experiment's sequential gate is designed to catch.
  bool skip_write = false;
};

/// One end-to-end experiment: a stable token for the verdict line, a short
/// description, and the experiment body.  The body writes "# ..." detail
/// lines to its log stream and reports overall success.
struct DemoRecipe {
  std::string token;
  std::string title;
  std::function<bool(std::ostream& log)> run;
};

/// The four experiments in their fixed order.
std::vector<DemoRecipe> demo_recipes(const DemoOptions& options = {});

/// Runs every recipe in order, printing detail lines and one
/// "PASS <token>" / "FAIL <token>" verdict line per recipe.  Returns 0 when
/// everything passed, 1 otherwise.  A recipe that throws fails.
int run_demo(std::ostream& out, const DemoOptions& options = {});

}  // namespace evsync
