#include <iostream>

#include "commands.hpp"
#include "qlnet/errors.hpp"

int main(int argc, char** argv) {
  using namespace qlnet;
  CLI::App app{"Q-learning on network polymatrix games"};
  app.require_subcommand(1);
  auto commands = cli::make_commands();
  for (auto& c : commands) c->add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  for (auto& c : commands) {
    if (!c->sub->parsed()) continue;
    try {
      if (!c->config.empty()) cli::apply_config_file(*c->sub, c->config);
      c->run();
      return kExitOk;
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      if (c->writes_outputs()) cli::write_error(c->out, *c->sub, kExitValidation, e.what());
      return kExitValidation;
    } catch (const std::exception& e) {
      const int code = exit_code_for(e);
      std::cerr << (code == kExitNumerical ? "numerical failure: " : "error: ") << e.what() << "\n";
      if (c->writes_outputs()) cli::write_error(c->out, *c->sub, code, e.what());
      return code;
    }
  }
  return kExitValidation;
}
