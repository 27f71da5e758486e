// Copyright 2026 The QRNA Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qrna/wire.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace qrna {

namespace {

void append_addresses(std::string &out, const std::vector<QubitAddress> &addresses) {
    for (size_t k = 0; k < addresses.size(); k++) {
        if (k) {
            out += ',';
        }
        out += to_string(addresses[k]);
    }
}

std::string encode_ops(const std::vector<CircuitOp> &ops) {
    std::string out = "[";
    for (size_t k = 0; k < ops.size(); k++) {
        if (k) {
            out += ';';
        }
        out += encode_op(ops[k]);
    }
    return out + "]";
}

std::string encode_tail(double f_min, double s_max, const std::vector<QubitAddress> &targets,
                        const std::string &encoding) {
    std::string out = " fmin=" + format_real(f_min) + " smax=" + format_real(s_max) + " targets=(";
    append_addresses(out, targets);
    return out + ") enc=" + encoding;
}

class Cursor {
   public:
    explicit Cursor(std::string_view text) : text_(text) {
    }

    size_t offset() const {
        return pos_;
    }
    bool done() const {
        return pos_ == text_.size();
    }
    bool peek(char c) const {
        return pos_ < text_.size() && text_[pos_] == c;
    }
    [[noreturn]] void fail(const std::string &message) const {
        throw ParseError(message, pos_);
    }

    void expect(std::string_view literal) {
        if (text_.substr(pos_, literal.size()) != literal) {
            fail("expected '" + std::string(literal) + "'");
        }
        pos_ += literal.size();
    }
    bool accept(char c) {
        if (peek(c)) {
            pos_++;
            return true;
        }
        return false;
    }

    std::string_view word() {
        size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
                pos_++;
            } else {
                break;
            }
        }
        if (start == pos_) {
            fail("expected a name");
        }
        return text_.substr(start, pos_ - start);
    }

    /// Everything up to (not including) the next space or end.
    std::string_view token() {
        size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != ',' && text_[pos_] != ')') {
            pos_++;
        }
        if (start == pos_) {
            fail("expected a value");
        }
        return text_.substr(start, pos_ - start);
    }

    uint64_t unsigned_int() {
        uint64_t value = 0;
        auto begin = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), value);
        if (ec != std::errc() || ptr == begin) {
            fail("expected an unsigned integer");
        }
        pos_ += static_cast<size_t>(ptr - begin);
        return value;
    }

    double real() {
        size_t start = pos_;
        auto tok = token();
        return parse_real(tok, start);
    }

   private:
    std::string_view text_;
    size_t pos_ = 0;
};

QubitAddress parse_address(Cursor &in) {
    QubitAddress address;
    address.node = std::string(in.word());
    in.expect(":");
    address.vaddr = in.unsigned_int();
    return address;
}

std::vector<QubitAddress> parse_address_list(Cursor &in, char close) {
    std::vector<QubitAddress> out;
    if (in.accept(close)) {
        return out;
    }
    do {
        out.push_back(parse_address(in));
    } while (in.accept(','));
    in.expect(std::string_view(&close, 1));
    return out;
}

CircuitOp parse_op(Cursor &in) {
    size_t start = in.offset();
    std::string_view name = in.word();
    in.expect("(");
    auto targets = parse_address_list(in, ')');
    CircuitOp op;
    op.targets = std::move(targets);
    if (name == "M") {
        op.kind = OpKind::Measure;
    } else if (name == "TELEPORT") {
        op.kind = OpKind::Teleport;
    } else if (auto gate = parse_gate_kind(name)) {
        op.kind = OpKind::Gate;
        op.gate = *gate;
    } else {
        throw ParseError("unknown operation '" + std::string(name) + "'", start);
    }
    return op;
}

std::vector<CircuitOp> parse_ops(Cursor &in) {
    in.expect("[");
    std::vector<CircuitOp> ops;
    if (in.accept(']')) {
        return ops;
    }
    do {
        ops.push_back(parse_op(in));
    } while (in.accept(';'));
    in.expect("]");
    return ops;
}

StateSpec parse_spec(Cursor &in) {
    size_t start = in.offset();
    std::string_view name = in.word();
    if (name == "CIRCUIT") {
        return StateSpec{CircuitSpec{parse_ops(in)}};
    }
    if (name == "BELL_PHI_PLUS") {
        return StateSpec{NamedSpec::bell_phi_plus()};
    }
    if (name == "GHZ" || name == "LINEAR_CLUSTER") {
        in.expect("(");
        auto n = in.unsigned_int();
        in.expect(")");
        return StateSpec{name == "GHZ" ? NamedSpec::ghz(n) : NamedSpec::linear_cluster(n)};
    }
    if (name == "FANOUT") {
        in.expect("(");
        double parts[4];
        for (double &p : parts) {
            p = in.real();
            in.expect(",");
        }
        auto n = in.unsigned_int();
        in.expect(")");
        return StateSpec{NamedSpec::fanout({parts[0], parts[1]}, {parts[2], parts[3]}, n)};
    }
    throw ParseError("unknown state spec '" + std::string(name) + "'", start);
}

void parse_tail(Cursor &in, double &f_min, double &s_max, std::vector<QubitAddress> &targets, std::string &encoding) {
    in.expect(" fmin=");
    f_min = in.real();
    in.expect(" smax=");
    s_max = in.real();
    in.expect(" targets=(");
    targets = parse_address_list(in, ')');
    in.expect(" enc=");
    encoding = std::string(in.word());
}

Message parse_message(Cursor &in) {
    std::string_view kind = in.word();
    if (kind == "REQ") {
        in.expect(" ");
        uint64_t id = in.unsigned_int();
        in.expect(" ");
        size_t type_offset = in.offset();
        std::string_view type = in.word();
        if (type == "STATE") {
            StateRequest request;
            request.id = id;
            in.expect(" spec=");
            request.spec = parse_spec(in);
            parse_tail(in, request.f_min, request.s_max, request.targets, request.encoding);
            return request;
        }
        if (type == "ACTION") {
            ActionRequest request;
            request.id = id;
            in.expect(" circuit=");
            request.circuit = parse_ops(in);
            parse_tail(in, request.f_min, request.s_max, request.targets, request.encoding);
            return request;
        }
        throw ParseError("unknown request type '" + std::string(type) + "'", type_offset);
    }
    if (kind == "RSP") {
        Response response;
        in.expect(" ");
        response.id = in.unsigned_int();
        in.expect(" status=");
        size_t status_offset = in.offset();
        std::string_view status = in.word();
        if (status == "OK") {
            response.status = ResponseStatus::Ok;
        } else if (status == "CONSTRAINT_VIOLATION") {
            response.status = ResponseStatus::ConstraintViolation;
        } else if (status == "FAIL") {
            response.status = ResponseStatus::Fail;
        } else {
            throw ParseError("unknown status '" + std::string(status) + "'", status_offset);
        }
        in.expect(" f=");
        response.measured_f = in.real();
        in.expect(" s=");
        response.measured_s = in.real();
        if (in.accept(' ')) {
            in.expect("err=");
            size_t err_offset = in.offset();
            std::string_view err = in.word();
            for (int c = 0; c <= static_cast<int>(ErrorCode::InvalidArgument); c++) {
                if (error_code_name(static_cast<ErrorCode>(c)) == err) {
                    response.error = static_cast<ErrorCode>(c);
                }
            }
            if (!response.error) {
                throw ParseError("unknown error code '" + std::string(err) + "'", err_offset);
            }
        }
        return response;
    }
    in.fail("expected REQ or RSP");
}

}  // namespace

std::string format_real(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (value == 0) {
        value = 0;  // fold -0 into 0
    }
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::general, 17);
    return std::string(buffer, ptr);
}

double parse_real(std::string_view text, size_t offset) {
    if (text == "nan") {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (text == "inf") {
        return std::numeric_limits<double>::infinity();
    }
    if (text == "-inf") {
        return -std::numeric_limits<double>::infinity();
    }
    double value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("malformed number '" + std::string(text) + "'", offset);
    }
    return value;
}

std::string encode_op(const CircuitOp &op) {
    std::string out;
    switch (op.kind) {
        case OpKind::Gate:
            out = std::string(gate_name(op.gate));
            break;
        case OpKind::Measure:
            out = "M";
            break;
        case OpKind::Teleport:
            out = "TELEPORT";
            break;
    }
    out += '(';
    append_addresses(out, op.targets);
    return out + ')';
}

std::string encode_spec(const StateSpec &spec) {
    if (const auto *circuit = std::get_if<CircuitSpec>(&spec.form)) {
        return "CIRCUIT" + encode_ops(circuit->ops);
    }
    const auto &named = std::get<NamedSpec>(spec.form);
    switch (named.kind) {
        case NamedState::BellPhiPlus:
            return "BELL_PHI_PLUS";
        case NamedState::Ghz:
            return "GHZ(" + std::to_string(named.n) + ")";
        case NamedState::LinearCluster:
            return "LINEAR_CLUSTER(" + std::to_string(named.n) + ")";
        case NamedState::Fanout:
            return "FANOUT(" + format_real(named.alpha.real()) + "," + format_real(named.alpha.imag()) + "," +
                   format_real(named.beta.real()) + "," + format_real(named.beta.imag()) + "," +
                   std::to_string(named.n) + ")";
    }
    return "?";
}

std::string encode(const StateRequest &request) {
    return "REQ " + std::to_string(request.id) + " STATE spec=" + encode_spec(request.spec) +
           encode_tail(request.f_min, request.s_max, request.targets, request.encoding);
}

std::string encode(const ActionRequest &request) {
    return "REQ " + std::to_string(request.id) + " ACTION circuit=" + encode_ops(request.circuit) +
           encode_tail(request.f_min, request.s_max, request.targets, request.encoding);
}

std::string encode(const Request &request) {
    return std::visit([](const auto &r) { return encode(r); }, request);
}

std::string encode(const Response &response) {
    std::string out = "RSP " + std::to_string(response.id) + " status=" + std::string(status_name(response.status)) +
                      " f=" + format_real(response.measured_f) + " s=" + format_real(response.measured_s);
    if (response.error) {
        out += " err=" + std::string(error_code_name(*response.error));
    }
    return out;
}

Message decode(std::string_view text) {
    Cursor in(text);
    Message message = parse_message(in);
    if (!in.done()) {
        in.fail("unexpected trailing input");
    }
    return message;
}

Request decode_request(std::string_view text) {
    Message message = decode(text);
    if (auto *state = std::get_if<StateRequest>(&message)) {
        return std::move(*state);
    }
    if (auto *action = std::get_if<ActionRequest>(&message)) {
        return std::move(*action);
    }
    throw ParseError("expected a request, found a response", 0);
}

Response decode_response(std::string_view text) {
    Message message = decode(text);
    if (auto *response = std::get_if<Response>(&message)) {
        return std::move(*response);
    }
    throw ParseError("expected a response, found a request", 0);
}

}  // namespace qrna
