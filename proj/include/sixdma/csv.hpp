// SPDX-License-Identifier: Apache-2.0
//
// sixdma: statistical channel estimation for six-dimensional movable antennas
// Copyright (C) 2026 The sixdma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SIXDMA_CSV_HPP
#define SIXDMA_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sixdma::csv
{
    using Record = std::vector<std::string>;

    // Quotes a field if it contains a comma, quote, CR or LF (RFC 4180)
    std::string escape(std::string_view field);

    // Writes one record terminated by CRLF
    void write_record(std::ostream &os, const Record &fields);

    // Parses a whole document. Accepts LF or CRLF line ends; a trailing empty line is ignored.
    // Throws std::runtime_error on an unterminated quoted field.
    std::vector<Record> parse(std::string_view text);

    // Shortest decimal text that reads back to the same double; "nan"/"inf" for non-finite values
    std::string format_double(double v);

    // Inverse of format_double. Throws std::invalid_argument on malformed input.
    double parse_double(std::string_view text);
}

#endif
