#include "ringflow/io.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ringflow/error.hpp"

namespace ringflow::io {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_one(std::string_view token) {
  std::string s(token);
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  }
  if (pos != s.size()) throw Error(ErrorCode::InvalidArgument, "not a number: '" + s + "'");
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',' || std::isspace(static_cast<unsigned char>(line[i]))) {
      if (i > start) out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      const std::string_view tok = trim(text.substr(start, i - start));
      if (tok.empty()) throw Error(ErrorCode::InvalidArgument, "empty entry in number list");
      out.push_back(parse_one(tok));
      start = i + 1;
    }
  }
  return out;
}

std::vector<double> read_vector_file(const std::filesystem::path& path, std::string_view key) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::string_view body = trim(text);

  if (!body.empty() && (body.front() == '[' || body.front() == '{')) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
      if (j.is_object()) {
        if (!j.contains(key)) {
          throw Error(ErrorCode::InvalidArgument,
                      "'" + path.string() + "' has no \"" + std::string(key) + "\" entry");
        }
        j = j.at(std::string(key));
      }
      return j.get<std::vector<double>>();
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::InvalidArgument, "bad JSON in '" + path.string() + "': " + ex.what());
    }
  }

  std::vector<double> out;
  std::istringstream lines(text);
  std::string line;
  bool first = true;
  while (std::getline(lines, line)) {
    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (first && !tokens.empty() &&
        !(std::isdigit(static_cast<unsigned char>(tokens[0][0])) || tokens[0][0] == '-' ||
          tokens[0][0] == '+' || tokens[0][0] == '.')) {
      first = false;  // header
      continue;
    }
    first = false;
    for (auto tok : tokens) out.push_back(parse_one(tok));
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "'" + path.string() + "' holds no numbers");
  return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorCode::Io, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move output into '" + path.string() + "'");
  }
}

}  // namespace ringflow::io
