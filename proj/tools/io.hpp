// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

// Stream plumbing for the command line tool: "-" means stdin/stdout, and
// every byte read or written is SHA-256 hashed for the run manifest.

#pragma once

#include <cstddef>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <streambuf>
#include <string>

namespace tsot::cli {

class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(const char* data, std::size_t size);
  /// Lowercase hex; the context may not be updated afterwards.
  std::string hex_digest();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

class HashingInBuf : public std::streambuf {
 public:
  explicit HashingInBuf(std::streambuf* source) : source_(source) {}
  Sha256& sha() { return sha_; }
  std::size_t bytes() const { return bytes_; }

 protected:
  int_type underflow() override;

 private:
  std::streambuf* source_;
  Sha256 sha_;
  std::size_t bytes_ = 0;
  char buffer_[1 << 16];
};

class HashingOutBuf : public std::streambuf {
 public:
  explicit HashingOutBuf(std::streambuf* sink) : sink_(sink) {}
  Sha256& sha() { return sha_; }
  std::size_t bytes() const { return bytes_; }

 protected:
  int_type overflow(int_type ch) override;
  std::streamsize xsputn(const char* s, std::streamsize n) override;
  int sync() override;

 private:
  std::streambuf* sink_;
  Sha256 sha_;
  std::size_t bytes_ = 0;
};

/// A named input; reads through a hashing buffer.
class Input {
 public:
  Input(const std::string& path, std::istream& stdin_stream);
  std::istream& stream() { return stream_; }
  const std::string& path() const { return path_; }
  std::size_t bytes() const { return buf_.bytes(); }
  std::string digest() { return buf_.sha().hex_digest(); }

 private:
  std::string path_;
  std::ifstream file_;
  HashingInBuf buf_;
  std::istream stream_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& stdout_stream);
  std::ostream& stream() { return stream_; }
  const std::string& path() const { return path_; }
  std::size_t bytes() const { return buf_.bytes(); }
  std::string digest() { return buf_.sha().hex_digest(); }

 private:
  std::string path_;
  std::ofstream file_;
  HashingOutBuf buf_;
  std::ostream stream_;
};

}  // namespace tsot::cli
