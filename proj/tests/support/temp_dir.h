#ifndef UNACC_TESTS_TEMP_DIR_H_
#define UNACC_TESTS_TEMP_DIR_H_

#include <filesystem>
#include <string>

namespace testing_util {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return path_; }
  std::string file(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string ReadFile(const std::string &path);
void WriteFile(const std::string &path, const std::string &text);

// Runs a shell command line and returns its exit status.
int RunCommand(const std::string &command);

}  // namespace testing_util

#endif  // UNACC_TESTS_TEMP_DIR_H_
