#include "probact/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace probact::kern {
namespace {

const KernelTable* select() {
  const KernelTable* best = &scalar_table();
#if defined(PROBACT_HAVE_AVX2_KERNELS)
  if (avx2_supported()) best = &avx2_table();
#endif
#if defined(PROBACT_HAVE_NEON_KERNELS)
  best = &neon_table();
#endif
  const char* request = std::getenv("PROBACT_KERNELS");
  if (request == nullptr || *request == '\0') return best;
  const std::string_view want{request};
  for (const KernelTable* table : available_tables())
    if (table->name == want) return table;
  return &scalar_table();
}

}  // namespace

std::vector<const KernelTable*> available_tables() {
  std::vector<const KernelTable*> tables{&scalar_table()};
#if defined(PROBACT_HAVE_AVX2_KERNELS)
  if (avx2_supported()) tables.push_back(&avx2_table());
#endif
#if defined(PROBACT_HAVE_NEON_KERNELS)
  tables.push_back(&neon_table());
#endif
  return tables;
}

const KernelTable& active() {
  static const KernelTable* const chosen = select();
  return *chosen;
}

}  // namespace probact::kern
