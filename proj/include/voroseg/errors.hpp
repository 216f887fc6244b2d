#pragma once

#include <stdexcept>
#include <string>

namespace voroseg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define VOROSEG_DEFINE_ERROR(name)                                            \
    class name : public Error {                                               \
    public:                                                                   \
        using Error::Error;                                                   \
    }

VOROSEG_DEFINE_ERROR(FileNotFoundError);
VOROSEG_DEFINE_ERROR(UnsupportedFormatError);
VOROSEG_DEFINE_ERROR(CorruptDataError);
VOROSEG_DEFINE_ERROR(IoError);
VOROSEG_DEFINE_ERROR(LabelOutOfRangeError);
VOROSEG_DEFINE_ERROR(PaletteTooSmallError);
VOROSEG_DEFINE_ERROR(ImageTooSmallError);
VOROSEG_DEFINE_ERROR(EmptySeedSetError);
VOROSEG_DEFINE_ERROR(EmptyInputError);
VOROSEG_DEFINE_ERROR(InvalidKError);
VOROSEG_DEFINE_ERROR(IndexOutOfRangeError);
VOROSEG_DEFINE_ERROR(EmptyDirectoryError);

#undef VOROSEG_DEFINE_ERROR

} // namespace voroseg
