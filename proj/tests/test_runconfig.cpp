#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dgner/errors.hpp"
#include "dgner/runconfig.hpp"
#include "doctest.h"

using namespace dgner;
namespace fs = std::filesystem;

namespace {

std::string write_temp(const std::string& content) {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() /
               ("runconf_" + std::to_string(++counter) + ".conf");
  std::ofstream out(p);
  out << content;
  return p.string();
}

}  // namespace

TEST_CASE("defaults without any input") {
  RunConfig rc = resolve_config({});
  CHECK(rc.model.arch == Arch::dglstm);
  CHECK(rc.model.layers == 2);
  CHECK(rc.model.interaction == Interaction::mlp);
  CHECK(rc.model.hidden == 200);
  CHECK(rc.model.word_dim == 100);
  CHECK(rc.model.dropout == 0.5);
  CHECK(rc.trainer.lr == 0.01);
  CHECK(rc.trainer.batch == 10);
  CHECK(rc.trainer.l2 == 1e-8);
  CHECK(rc.trainer.epochs == 100);
  CHECK(rc.trainer.clip == 0.0);
  CHECK(rc.trainer.shuffle);
  CHECK(rc.seed == 42);
  CHECK(rc.trainer.seed == 42);
}

TEST_CASE("config files parse comments, blanks, spacing, repeats") {
  std::string path = write_temp(
      "# a comment\n"
      "\n"
      "  lr   =  0.25  \n"
      "arch=bilstm\n"
      "lr = 0.5\n");  // later line wins
  KeyValues kv = read_config_file(path);
  CHECK(kv.at("lr") == "0.5");
  CHECK(kv.at("arch") == "bilstm");
  RunConfig rc = resolve_config(kv);
  CHECK(rc.trainer.lr == 0.5);
  CHECK(rc.model.arch == Arch::bilstm);
}

TEST_CASE("flag overrides beat the file") {
  KeyValues kv = read_config_file(write_temp("lr = 0.5\nbatch = 4\n"));
  apply_overrides(kv, {"lr=0.125", "seed=7"});
  RunConfig rc = resolve_config(kv);
  CHECK(rc.trainer.lr == 0.125);
  CHECK(rc.trainer.batch == 4);
  CHECK(rc.seed == 7);
  CHECK(rc.trainer.seed == 7);
}

TEST_CASE("unknown keys are named in the error") {
  CHECK_THROWS_WITH_AS((void)resolve_config({{"leerning_rate", "3"}}),
                       "unknown config key 'leerning_rate'", ConfigError);
  KeyValues kv;
  CHECK_THROWS_AS(apply_overrides(kv, {"no_equals_sign"}), ConfigError);
}

TEST_CASE("malformed values are config errors") {
  CHECK_THROWS_AS((void)resolve_config({{"layers", "two"}}), ConfigError);
  CHECK_THROWS_AS((void)resolve_config({{"layers", "2x"}}), ConfigError);
  CHECK_THROWS_AS((void)resolve_config({{"dropout", "half"}}), ConfigError);
  CHECK_THROWS_AS((void)resolve_config({{"shuffle", "maybe"}}), ConfigError);
  CHECK_THROWS_AS((void)resolve_config({{"arch", "transformer"}}), ConfigError);
  CHECK_THROWS_AS((void)resolve_config({{"interaction", "gated"}}), ConfigError);
  CHECK_THROWS_AS(
      (void)read_config_file(write_temp("just some words\n")), ConfigError);
  CHECK_THROWS_AS((void)read_config_file("/nonexistent/x.conf"), ConfigError);
}

TEST_CASE("graph-convolution runs get longer schedules unless overridden") {
  RunConfig gcn = resolve_config({{"arch", "bilstm-gcn"}});
  CHECK(gcn.trainer.epochs == 300);
  CHECK(gcn.trainer.clip == 3.0);

  RunConfig overridden = resolve_config(
      {{"arch", "bilstm-gcn"}, {"epochs", "50"}, {"clip", "0"}});
  CHECK(overridden.trainer.epochs == 50);
  CHECK(overridden.trainer.clip == 0.0);

  RunConfig plain = resolve_config({{"arch", "bilstm"}});
  CHECK(plain.trainer.epochs == 100);
  CHECK(plain.trainer.clip == 0.0);
}

TEST_CASE("boolean spellings") {
  CHECK(resolve_config({{"mask_transitions", "true"}}).model.mask_transitions);
  CHECK(resolve_config({{"mask_transitions", "1"}}).model.mask_transitions);
  CHECK(!resolve_config({{"mask_transitions", "false"}}).model.mask_transitions);
  CHECK(!resolve_config({{"mask_transitions", "0"}}).model.mask_transitions);
}

TEST_CASE("echo round trips through the parser") {
  RunConfig rc = resolve_config({{"arch", "bilstm-gcn"},
                                 {"gcn_layers", "2"},
                                 {"dropout", "0.37"},
                                 {"lr", "0.0125"},
                                 {"seed", "99"},
                                 {"train_corpus", "a b.txt"},
                                 {"mask_transitions", "true"}});
  std::ostringstream echoed;
  echo_config(rc, echoed);
  std::string path = write_temp(echoed.str());
  RunConfig rc2 = resolve_config(read_config_file(path));

  CHECK(rc2.model.arch == rc.model.arch);
  CHECK(rc2.model.gcn_layers == rc.model.gcn_layers);
  CHECK(rc2.model.dropout == rc.model.dropout);
  CHECK(rc2.model.mask_transitions == rc.model.mask_transitions);
  CHECK(rc2.trainer.lr == rc.trainer.lr);
  CHECK(rc2.trainer.epochs == rc.trainer.epochs);
  CHECK(rc2.trainer.clip == rc.trainer.clip);
  CHECK(rc2.seed == rc.seed);
  CHECK(rc2.train_corpus == rc.train_corpus);

  // echoing the reparsed config reproduces the same bytes
  std::ostringstream echoed2;
  echo_config(rc2, echoed2);
  CHECK(echoed.str() == echoed2.str());
}

TEST_CASE("architecture and interaction spellings round trip") {
  CHECK(arch_from_string("bilstm") == Arch::bilstm);
  CHECK(arch_from_string("dglstm") == Arch::dglstm);
  CHECK(arch_from_string("bilstm-gcn") == Arch::bilstm_gcn);
  CHECK(to_string(Arch::bilstm_gcn) == "bilstm-gcn");
  CHECK(interaction_from_string("self") == Interaction::self);
  CHECK(interaction_from_string("concat") == Interaction::concat);
  CHECK(interaction_from_string("add") == Interaction::add);
  CHECK(interaction_from_string("mlp") == Interaction::mlp);
  CHECK(to_string(Interaction::mlp) == "mlp");
}
