#pragma once
// Error types shared across the treelim library.

#include <stdexcept>
#include <string>

namespace treelim {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define TREELIM_DEFINE_ERROR(NAME)                                 \
    struct NAME : Error {                                          \
        explicit NAME(const std::string& what) : Error(what) {}    \
    }

// degree sequences and degree models
TREELIM_DEFINE_ERROR(EntryBelowOne);
TREELIM_DEFINE_ERROR(SumMismatch);
TREELIM_DEFINE_ERROR(NTooLarge);
TREELIM_DEFINE_ERROR(RetriesExhausted);
TREELIM_DEFINE_ERROR(InfeasibleModel);
TREELIM_DEFINE_ERROR(UnconditionedSumZero);
TREELIM_DEFINE_ERROR(OverlappingSupports);

// trees and Pruefer codes
TREELIM_DEFINE_ERROR(SymbolOutOfRange);
TREELIM_DEFINE_ERROR(TooManyTrees);
TREELIM_DEFINE_ERROR(UnsupportedModel);

// rooted balls
TREELIM_DEFINE_ERROR(NonDivisible);

// numbered forests and embedding probabilities
TREELIM_DEFINE_ERROR(NotAForest);
TREELIM_DEFINE_ERROR(InconsistentRemainders);
TREELIM_DEFINE_ERROR(DegenerateConfiguration);

// limit measure
TREELIM_DEFINE_ERROR(CapExceeded);
TREELIM_DEFINE_ERROR(NotConsistent);
TREELIM_DEFINE_ERROR(ZeroMassBase);
TREELIM_DEFINE_ERROR(DepthMismatch);

// harness
TREELIM_DEFINE_ERROR(ConfigError);

#undef TREELIM_DEFINE_ERROR

}  // namespace treelim
