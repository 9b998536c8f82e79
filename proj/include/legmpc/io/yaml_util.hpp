// Copyright 2026 The legmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEGMPC_IO_YAML_UTIL_HPP_
#define LEGMPC_IO_YAML_UTIL_HPP_

#include <yaml-cpp/yaml.h>

#include <Eigen/Core>

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace legmpc {

/// Configuration problem. `field()` is the dotted path of the offending key
/// (empty for syntax errors); `line()` is 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, std::string field, int line, const std::string& msg)
      : std::runtime_error(format(source, field, line, msg)),
        source_(std::move(source)),
        field_(std::move(field)),
        line_(line) {}

  const std::string& source() const { return source_; }
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& source, const std::string& field, int line,
                            const std::string& msg) {
    std::string out = source;
    if (line > 0) out += ":" + std::to_string(line);
    if (!field.empty()) out += ": " + field;
    return out + ": " + msg;
  }

  std::string source_;
  std::string field_;
  int line_;
};

namespace yaml {

inline std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

inline int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

/// Read-only view of a YAML node that knows its dotted path.
class Field {
 public:
  Field(YAML::Node node, std::string path, std::string source)
      : node_(std::move(node)), path_(std::move(path)), source_(std::move(source)) {}

  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }
  const std::string& source() const { return source_; }
  bool defined() const { return node_.IsDefined() && !node_.IsNull(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(source_, path_, defined() ? line_of(node_) : 0, msg);
  }

  Field operator[](const std::string& key) const {
    if (defined() && !node_.IsMap()) fail("expected a mapping");
    return Field(defined() ? node_[key] : YAML::Node(), join(path_, key), source_);
  }

  Field operator[](std::size_t i) const {
    return Field(node_[i], path_ + "[" + std::to_string(i) + "]", source_);
  }

  std::size_t size() const {
    if (!defined()) return 0;
    if (!node_.IsSequence()) fail("expected a sequence");
    return node_.size();
  }

  void require_keys(std::initializer_list<const char*> allowed) const {
    if (!defined()) return;
    if (!node_.IsMap()) fail("expected a mapping");
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) {
        throw ConfigError(source_, join(path_, key), line_of(kv.first), "unknown key");
      }
    }
  }

  template <class T>
  T as() const {
    if (!defined()) fail("missing value");
    try {
      return node_.as<T>();
    } catch (const YAML::Exception&) {
      fail("invalid value");
    }
  }

  template <class T>
  T get(const T& fallback) const {
    return defined() ? as<T>() : fallback;
  }

  Eigen::VectorXd vector(int expected_size) const {
    if (!defined() || !node_.IsSequence()) fail("expected a sequence of numbers");
    if (expected_size >= 0 && static_cast<int>(node_.size()) != expected_size) {
      fail("expected " + std::to_string(expected_size) + " numbers");
    }
    Eigen::VectorXd v(node_.size());
    for (std::size_t i = 0; i < node_.size(); ++i) v[i] = (*this)[i].as<double>();
    return v;
  }

  Eigen::Vector3d vec3() const { return vector(3); }
  Eigen::Vector2d vec2() const { return vector(2); }

 private:
  YAML::Node node_;
  std::string path_;
  std::string source_;
};

inline YAML::Node parse_text(const std::string& text, const std::string& source) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, "", e.mark.line + 1, e.msg);
  }
}

inline YAML::Node parse_file(const std::string& path) {
  try {
    return YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError(path, "", 0, "cannot open file");
  } catch (const YAML::ParserException& e) {
    throw ConfigError(path, "", e.mark.line + 1, e.msg);
  }
}

}  // namespace yaml
}  // namespace legmpc

#endif  // LEGMPC_IO_YAML_UTIL_HPP_
