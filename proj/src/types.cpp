#include "ironic/types.hpp"

#include "ironic/util/text_io.hpp"

namespace ironic {

std::string CleanSentence::joined() const { return join(tokens, " "); }

}  // namespace ironic
