#ifndef POLYISO_CLI_H
#define POLYISO_CLI_H

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "polyiso/analysis.h"
#include "polyiso/kleetope.h"
#include "polyiso/verify.h"

namespace polyiso {

// Version of the JSON report layout; bumped on any field change.
inline constexpr int kReportSchemaVersion = 1;

enum ExitCode { kExitOk = 0, kExitUsage = 1, kExitInvariant = 2 };

// Runs one command line (without the program name). Reports go to `out`
// unless redirected to a file, diagnostics to `err`.
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// Angles are written in radians, or degrees when `degrees` is set.
nlohmann::ordered_json AuditToJson(const AuditReport &r, bool degrees);
nlohmann::ordered_json BigDihedralToJson(const std::vector<BigDihedralStream> &streams,
                                         bool degrees);
nlohmann::ordered_json ObtuseProjectionToJson(const ObtuseProjectionReport &r, bool degrees);
nlohmann::ordered_json SharpnessDecayToJson(const SharpnessDecayReport &r, bool degrees);

// Names of the structural claims a convex monohedral isosceles mesh violates
// in `r`; empty for any other mesh.
std::vector<std::string> AuditFailures(const AuditReport &r);

// Abstract triangulation text: an OFF file (coordinates ignored) or a
// "V F" header followed by F lines of three 0-based vertex indices. '#'
// starts a comment. Throws ParseError or TopologyError.
AbstractTriangulation ReadTriangulation(const std::string &text);
// OFF with every vertex at the origin.
std::string WriteTriangulationOff(const AbstractTriangulation &g);

}  // namespace polyiso

#endif  // POLYISO_CLI_H
