#pragma once

#include <iosfwd>

#include "fprmt_cli/cli.hpp"
#include "fprmt_cli/output.hpp"

namespace fprmt::cli {

int cmd_det_curve(const Options& o, Manifest& m, std::ostream& log);
int cmd_subleading(const Options& o, Manifest& m, std::ostream& log);
int cmd_density(const Options& o, Manifest& m, std::ostream& log);
int cmd_verify_theorem(const Options& o, Manifest& m, std::ostream& log);
int cmd_verify_lemma(const Options& o, Manifest& m, std::ostream& log);
int cmd_field_gallery(const Options& o, Manifest& m, std::ostream& log);

}  // namespace fprmt::cli
