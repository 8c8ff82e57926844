#pragma once

#include <string>
#include <vector>

namespace fracflow {

class RunManifest;

namespace cli {

/// Exit codes: 0 ok, 1 check failure, 2 config error, 3 numerical abort.
int run(const std::vector<std::string>& args);

int cmd_eval(const RunManifest& m);
int cmd_flow(const RunManifest& m);
int cmd_compare(const RunManifest& m);
int cmd_verify(const RunManifest& m);
int cmd_oracle(const RunManifest& m);

}  // namespace cli
}  // namespace fracflow
