#pragma once

namespace dcsplit {

/// `git describe --always --dirty` of the source tree at configure time.
const char* git_describe();
const char* version_string();

}  // namespace dcsplit
