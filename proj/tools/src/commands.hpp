#pragma once

#include <memory>
#include <string>
#include <vector>

#include "cli_common.hpp"

namespace qlnet::cli {

class Command {
 public:
  virtual ~Command() = default;

  virtual void add(CLI::App& app) = 0;
  virtual void run() = 0;
  virtual bool writes_outputs() const { return true; }

  CLI::App* sub = nullptr;
  OutputOptions out;
  std::string config;

 protected:
  // Registers the subcommand with the options every command shares.
  CLI::App* make(CLI::App& app, const std::string& name, const std::string& help);
};

std::vector<std::unique_ptr<Command>> make_commands();

}  // namespace qlnet::cli
