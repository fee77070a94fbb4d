#pragma once

#include <string>
#include <utility>
#include <vector>

namespace gate_trees {

// One small tree per gate kind: the gate at the top, two or three leaves below.
inline const std::vector<std::pair<std::string, std::string>>& all()
{
  static const std::vector<std::pair<std::string, std::string>> trees{
      {"and", "toplevel \"G\";\n\"G\" and \"A\" \"B\" \"C\" cost=1;\n"
              "\"A\" mintime=1 maxtime=3 cost=2;\n\"B\" time=2 cost=3 damage=4;\n\"C\" mintime=0 maxtime=1 cost=5;\n"},
      {"or", "toplevel \"G\";\n\"G\" or \"A\" \"B\" \"C\";\n"
             "\"A\" mintime=1 maxtime=3 cost=2;\n\"B\" time=2 cost=3 damage=4;\n\"C\" mintime=2 maxtime=5 cost=5;\n"},
      {"sand", "toplevel \"G\";\n\"G\" sand \"A\" \"B\" \"C\" damage=7;\n"
               "\"A\" mintime=1 maxtime=2 cost=2;\n\"B\" time=3 cost=3;\n\"C\" mintime=0 maxtime=2 cost=5;\n"},
      {"sor", "toplevel \"G\";\n\"G\" sor \"A\" \"B\" \"C\";\n"
              "\"A\" mintime=1 maxtime=2 cost=2;\n\"B\" time=3 cost=3;\n\"C\" mintime=0 maxtime=2 cost=5 damage=1;\n"},
      {"pand", "toplevel \"G\";\n\"G\" pand \"A\" \"B\" cost=1;\n"
               "\"A\" mintime=1 maxtime=4 cost=2;\n\"B\" mintime=2 maxtime=3 cost=3;\n"},
      {"xor", "toplevel \"G\";\n\"G\" xor \"A\" \"B\";\n"
              "\"A\" mintime=1 maxtime=3 cost=2;\n\"B\" time=2 cost=3 damage=6;\n"},
      {"fdep", "toplevel \"G\";\n\"G\" fdep \"T\" \"A\" \"B\";\n"
               "\"T\" mintime=1 maxtime=2 cost=1;\n\"A\" time=5 cost=2;\n\"B\" time=9 cost=4 damage=3;\n"},
      {"wsp", "toplevel \"G\";\n\"G\" wsp \"A\" \"B\";\n"
              "\"A\" mintime=2 maxtime=4 cost=2;\n\"B\" mintime=1 maxtime=2 cost=3;\n"},
      {"vot", "toplevel \"G\";\n\"G\" 2of3 \"A\" \"B\" \"C\" cost=1 damage=1;\n"
              "\"A\" mintime=1 maxtime=3 cost=2;\n\"B\" time=2 cost=3;\n\"C\" mintime=0 maxtime=4 cost=5;\n"},
  };
  return trees;
}

}  // namespace gate_trees
