#pragma once

#include <stdexcept>
#include <string>

namespace dappcheck {

enum class ErrorCode {
  kInvalidArgument = 1,
  kIo,
  kSyntax,
  kSsaViolation,
  kUnknownOpcode,
  kDanglingTarget,
  kRpc,
  kMalformedResponse,
  kMockFormat,
  kNotAString,
  kUnboundLeaf,
  kAttributes,
  kLlm,
  kInternal,
};

/// Base of every error raised by the analysis core. The C API maps the
/// code onto its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

class SyntaxError : public Error {
 public:
  SyntaxError(int line, const std::string& reason)
      : Error(ErrorCode::kSyntax,
              "line " + std::to_string(line) + ": " + reason),
        line_(line),
        reason_(reason) {}
  int line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  int line_;
  std::string reason_;
};

class SsaViolation : public Error {
 public:
  SsaViolation(const std::string& var, int line)
      : Error(ErrorCode::kSsaViolation,
              "line " + std::to_string(line) + ": variable " + var +
                  " defined more than once"),
        var_(var) {}
  const std::string& var() const noexcept { return var_; }

 private:
  std::string var_;
};

class UnknownOpcode : public Error {
 public:
  UnknownOpcode(const std::string& name, int line)
      : Error(ErrorCode::kUnknownOpcode,
              "line " + std::to_string(line) + ": unknown opcode " + name),
        name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DanglingTarget : public Error {
 public:
  DanglingTarget(const std::string& target, int line)
      : Error(ErrorCode::kDanglingTarget,
              "line " + std::to_string(line) + ": unknown target " + target),
        target_(target) {}
  const std::string& target() const noexcept { return target_; }

 private:
  std::string target_;
};

class RpcError : public Error {
 public:
  explicit RpcError(const std::string& what) : Error(ErrorCode::kRpc, what) {}
};

class MalformedResponse : public Error {
 public:
  explicit MalformedResponse(const std::string& what)
      : Error(ErrorCode::kMalformedResponse, what) {}
};

class MockFormatError : public Error {
 public:
  explicit MockFormatError(const std::string& what)
      : Error(ErrorCode::kMockFormat, what) {}
};

class NotAString : public Error {
 public:
  explicit NotAString(const std::string& what)
      : Error(ErrorCode::kNotAString, what) {}
};

class UnboundLeaf : public Error {
 public:
  explicit UnboundLeaf(const std::string& leaf)
      : Error(ErrorCode::kUnboundLeaf, "unbound leaf " + leaf), leaf_(leaf) {}
  const std::string& leaf() const noexcept { return leaf_; }

 private:
  std::string leaf_;
};

class AttributeError : public Error {
 public:
  explicit AttributeError(const std::string& what)
      : Error(ErrorCode::kAttributes, what) {}
};

class LlmError : public Error {
 public:
  explicit LlmError(const std::string& what) : Error(ErrorCode::kLlm, what) {}
};

}  // namespace dappcheck
