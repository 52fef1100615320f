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

#include "sixdma/csv.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace sixdma::csv
{
    std::string escape(std::string_view field)
    {
        if (field.find_first_of(",\"\r\n") == std::string_view::npos)
            return std::string(field);
        std::string out = "\"";
        for (char c : field)
        {
            if (c == '"')
                out += '"';
            out += c;
        }
        out += '"';
        return out;
    }

    void write_record(std::ostream &os, const Record &fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i > 0)
                os << ',';
            os << escape(fields[i]);
        }
        os << "\r\n";
    }

    std::vector<Record> parse(std::string_view text)
    {
        std::vector<Record> records;
        Record current;
        std::string field;
        bool quoted = false, field_started = false;

        auto end_field = [&]
        {
            current.push_back(std::move(field));
            field.clear();
            field_started = false;
        };
        auto end_record = [&]
        {
            end_field();
            records.push_back(std::move(current));
            current.clear();
        };

        for (std::size_t i = 0; i < text.size(); ++i)
        {
            const char c = text[i];
            if (quoted)
            {
                if (c == '"')
                {
                    if (i + 1 < text.size() && text[i + 1] == '"')
                    {
                        field += '"';
                        ++i;
                    }
                    else
                        quoted = false;
                }
                else
                    field += c;
                continue;
            }
            switch (c)
            {
            case '"':
                if (field_started || !field.empty())
                    throw std::runtime_error("csv: quote inside an unquoted field");
                quoted = true;
                field_started = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n')
                    ++i;
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                field += c;
                field_started = true;
            }
        }
        if (quoted)
            throw std::runtime_error("csv: unterminated quoted field");
        if (field_started || !field.empty() || !current.empty())
            end_record();
        return records;
    }

    std::string format_double(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, res.ptr);
    }

    double parse_double(std::string_view text)
    {
        if (text == "nan")
            return std::numeric_limits<double>::quiet_NaN();
        if (text == "inf")
            return std::numeric_limits<double>::infinity();
        if (text == "-inf")
            return -std::numeric_limits<double>::infinity();
        double v = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
        if (res.ec != std::errc() || res.ptr != text.data() + text.size())
            throw std::invalid_argument("csv: not a number: '" + std::string(text) + "'");
        return v;
    }
}
