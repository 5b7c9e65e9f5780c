#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace paradet {

// Base class for every failure the library reports. Callers that only need
// a diagnostic can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Resource and file errors.
class MissingFile : public Error {
 public:
  explicit MissingFile(const std::string& path) : Error("missing file: " + path), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class MalformedLine : public Error {
 public:
  MalformedLine(const std::string& file, std::size_t line_no, const std::string& why = "")
      : Error("malformed line " + std::to_string(line_no) + " in " + file + (why.empty() ? "" : ": " + why)),
        file_(file),
        line_no_(line_no) {}
  const std::string& file() const { return file_; }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string file_;
  std::size_t line_no_;
};

class UnknownSynset : public Error {
 public:
  using Error::Error;
};

class HeaderMismatch : public Error {
 public:
  using Error::Error;
};

class TruncatedVector : public Error {
 public:
  explicit TruncatedVector(const std::string& word) : Error("truncated vector for word '" + word + "'"), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class DimMismatch : public Error {
 public:
  using Error::Error;
};

// Similarity errors.
class EmptySentence : public Error {
 public:
  EmptySentence() : Error("suspect sentence has no content tokens") {}
};

class EmptySuspect : public Error {
 public:
  EmptySuspect() : Error("suspect text is empty after canonicalization") {}
};

class EmptyPassage : public Error {
 public:
  explicit EmptyPassage(const std::string& which) : Error("EmptyPassage: " + which + " passage has no sentences") {}
};

// Classifier and evaluation errors.
class EmptyTrainingSet : public Error {
 public:
  EmptyTrainingSet() : Error("training set is empty") {}
};

class DegenerateClass : public Error {
 public:
  using Error::Error;
};

class SingleClassInput : public Error {
 public:
  SingleClassInput() : Error("AUC needs both positive and negative examples") {}
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Corpus errors.
class MetadataParse : public Error {
 public:
  using Error::Error;
};

class UnknownCategory : public Error {
 public:
  explicit UnknownCategory(const std::string& category) : Error("unknown category: '" + category + "'") {}
};

// Configuration errors (bad keys, out-of-range thresholds, bad flags).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace paradet
