#include "vlmc/sample_io.hpp"

#include <fstream>
#include <sstream>

#include "vlmc/errors.hpp"

namespace vlmc {

SamplePath parse_sample(std::string_view text) {
  SamplePath path;
  path.symbols.reserve(text.size());
  bool line_start = true;
  bool in_comment = false;
  for (char c : text) {
    if (c == '\n') {
      line_start = true;
      in_comment = false;
      continue;
    }
    if (in_comment) continue;
    if (line_start && c == '#') {
      in_comment = true;
      continue;
    }
    line_start = false;
    if (c == '0') {
      path.symbols.push_back(Symbol::Zero);
    } else if (c == '1') {
      path.symbols.push_back(Symbol::One);
    } else if (c != '\r') {
      throw FormatError("sample contains invalid character '" + std::string(1, c) + "'");
    }
  }
  return path;
}

std::string format_sample(const SamplePath& path, std::string_view header) {
  std::string out;
  out.reserve(path.symbols.size() + header.size() + 4);
  if (!header.empty()) {
    out += "# ";
    out += header;
    out += '\n';
  }
  for (Symbol s : path.symbols) out.push_back(to_char(s));
  out += '\n';
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw FormatError("write failed for " + path);
}

}  // namespace vlmc
