// Copyright 2026 The tsot Authors
// SPDX-License-Identifier: Apache-2.0

#include "io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <istream>
#include <ostream>

#include "tsot/errors.hpp"

namespace tsot::cli {

struct Sha256::Impl {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  bool finished = false;
  std::string digest;
};

Sha256::Sha256() : impl_(std::make_unique<Impl>()) {
  if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1) {
    throw Error("cannot initialise SHA-256");
  }
}

Sha256::~Sha256() { EVP_MD_CTX_free(impl_->ctx); }

void Sha256::update(const char* data, std::size_t size) {
  if (size > 0 && !impl_->finished) EVP_DigestUpdate(impl_->ctx, data, size);
}

std::string Sha256::hex_digest() {
  if (!impl_->finished) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(impl_->ctx, md, &len);
    impl_->digest.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
      char hex[3];
      std::snprintf(hex, sizeof hex, "%02x", md[i]);
      impl_->digest += hex;
    }
    impl_->finished = true;
  }
  return impl_->digest;
}

HashingInBuf::int_type HashingInBuf::underflow() {
  if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
  const std::streamsize n = source_->sgetn(buffer_, sizeof buffer_);
  if (n <= 0) return traits_type::eof();
  sha_.update(buffer_, static_cast<std::size_t>(n));
  bytes_ += static_cast<std::size_t>(n);
  setg(buffer_, buffer_, buffer_ + n);
  return traits_type::to_int_type(*gptr());
}

HashingOutBuf::int_type HashingOutBuf::overflow(int_type ch) {
  if (traits_type::eq_int_type(ch, traits_type::eof())) return traits_type::not_eof(ch);
  const char c = traits_type::to_char_type(ch);
  return xsputn(&c, 1) == 1 ? ch : traits_type::eof();
}

std::streamsize HashingOutBuf::xsputn(const char* s, std::streamsize n) {
  const std::streamsize written = sink_->sputn(s, n);
  if (written > 0) {
    sha_.update(s, static_cast<std::size_t>(written));
    bytes_ += static_cast<std::size_t>(written);
  }
  return written;
}

int HashingOutBuf::sync() { return sink_->pubsync(); }

Input::Input(const std::string& path, std::istream& stdin_stream)
    : path_(path),
      buf_(path == "-" ? stdin_stream.rdbuf() : (file_.open(path, std::ios::binary), file_.rdbuf())),
      stream_(&buf_) {
  if (path != "-" && !file_.is_open()) throw Error("cannot open '" + path + "' for reading");
}

Output::Output(const std::string& path, std::ostream& stdout_stream)
    : path_(path),
      buf_(path == "-" ? stdout_stream.rdbuf() : (file_.open(path, std::ios::binary | std::ios::trunc), file_.rdbuf())),
      stream_(&buf_) {
  if (path != "-" && !file_.is_open()) throw Error("cannot open '" + path + "' for writing");
}

}  // namespace tsot::cli
