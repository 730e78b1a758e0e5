// Copyright 2026 The idexpose Authors
// Licensed under the Apache License, Version 2.0

#include "idexpose/extraction.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace idexpose {

namespace {

void appendUtf8(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Length of the valid UTF-8 sequence starting at s[i], or 0 if invalid.
std::size_t utf8SequenceLength(std::string_view s, std::size_t i)
{
    const auto b0 = static_cast<unsigned char>(s[i]);
    auto cont = [&](std::size_t k) {
        return i + k < s.size() && (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
    };
    if (b0 < 0x80)
        return 1;
    if (b0 >= 0xC2 && b0 <= 0xDF)
        return cont(1) ? 2 : 0;
    if (b0 >= 0xE0 && b0 <= 0xEF) {
        if (!cont(1) || !cont(2))
            return 0;
        const auto b1 = static_cast<unsigned char>(s[i + 1]);
        if (b0 == 0xE0 && b1 < 0xA0)
            return 0;  // overlong
        if (b0 == 0xED && b1 >= 0xA0)
            return 0;  // surrogate
        return 3;
    }
    if (b0 >= 0xF0 && b0 <= 0xF4) {
        if (!cont(1) || !cont(2) || !cont(3))
            return 0;
        const auto b1 = static_cast<unsigned char>(s[i + 1]);
        if (b0 == 0xF0 && b1 < 0x90)
            return 0;
        if (b0 == 0xF4 && b1 >= 0x90)
            return 0;
        return 4;
    }
    return 0;
}

std::vector<std::string> splitCommand(const std::string& command)
{
    std::vector<std::string> args;
    std::string current;
    bool inQuote = false;
    bool any = false;
    for (char c : command) {
        if (c == '"') {
            inQuote = !inQuote;
            any = true;
        } else if ((c == ' ' || c == '\t') && !inQuote) {
            if (any)
                args.push_back(std::move(current));
            current.clear();
            any = false;
        } else {
            current.push_back(c);
            any = true;
        }
    }
    if (inQuote)
        throw std::invalid_argument("unbalanced quote in extractor command: " + command);
    if (any)
        args.push_back(std::move(current));
    return args;
}

std::string replaceAll(std::string s, std::string_view from, std::string_view to)
{
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
    return s;
}

std::string lowerAscii(std::string_view s)
{
    std::string out(s);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z')
            c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

// Scratch file removed on scope exit.
class StagedFile {
public:
    StagedFile(std::string_view bytes, std::string_view ext)
    {
        std::random_device rd;
        std::uniform_int_distribution<unsigned long long> dist;
        std::ostringstream name;
        name << "idexpose-" << ::getpid() << "-" << std::hex << dist(rd);
        if (!ext.empty())
            name << "." << ext;
        mPath = std::filesystem::temp_directory_path() / name.str();
        std::ofstream out(mPath, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw ExtractionError("cannot stage object to " + mPath.string());
    }
    ~StagedFile()
    {
        std::error_code ec;
        std::filesystem::remove(mPath, ec);
    }
    StagedFile(const StagedFile&) = delete;
    StagedFile& operator=(const StagedFile&) = delete;

    const std::filesystem::path& path() const { return mPath; }

private:
    std::filesystem::path mPath;
};

struct Pipe {
    int fds[2]{-1, -1};
    Pipe()
    {
        if (::pipe2(fds, O_CLOEXEC) != 0)
            throw ExtractionError(std::string("pipe failed: ") + std::strerror(errno));
    }
    ~Pipe()
    {
        closeRead();
        closeWrite();
    }
    void closeRead()
    {
        if (fds[0] >= 0)
            ::close(fds[0]);
        fds[0] = -1;
    }
    void closeWrite()
    {
        if (fds[1] >= 0)
            ::close(fds[1]);
        fds[1] = -1;
    }
};

constexpr std::size_t kMaxStdout = 512ull * 1024 * 1024;
constexpr std::size_t kMaxStderr = 16 * 1024;

}  // namespace

ExtractionError::ExtractionError(const std::string& what, std::vector<ExtractorFailure> failures)
    : std::runtime_error(what), mFailures(std::move(failures))
{
}

ExtractorSpec ExtractorSpec::builtin(Kind kind, std::string name, std::set<std::string> types)
{
    ExtractorSpec s;
    s.name = std::move(name);
    s.kind = kind;
    s.applicable_types = std::move(types);
    s.check();
    return s;
}

ExtractorSpec ExtractorSpec::external(std::string name, std::string command, std::set<std::string> types,
                                      Millis timeout)
{
    ExtractorSpec s;
    s.name = std::move(name);
    s.kind = Kind::External;
    s.command = std::move(command);
    s.applicable_types = std::move(types);
    s.timeout = timeout;
    s.check();
    return s;
}

void ExtractorSpec::check() const
{
    if (name.empty())
        throw std::invalid_argument("extractor name is empty");
    if (applicable_types.empty())
        throw std::invalid_argument("extractor " + name + " has no applicable types");
    if (kind == Kind::External) {
        if (command.find("{input}") == std::string::npos)
            throw std::invalid_argument("external extractor " + name + " command lacks {input}");
        if (timeout.count() <= 0)
            throw std::invalid_argument("external extractor " + name + " needs a positive timeout");
    }
}

bool isValidUtf8(std::string_view s)
{
    std::size_t i = 0;
    while (i < s.size()) {
        auto n = utf8SequenceLength(s, i);
        if (n == 0)
            return false;
        i += n;
    }
    return true;
}

std::string sanitizeUtf8(std::string_view bytes, bool* replaced)
{
    std::string out;
    out.reserve(bytes.size());
    bool any = false;
    std::size_t i = 0;
    while (i < bytes.size()) {
        auto n = utf8SequenceLength(bytes, i);
        if (n == 0) {
            appendUtf8(out, U'\uFFFD');
            any = true;
            ++i;
        } else {
            out.append(bytes.substr(i, n));
            i += n;
        }
    }
    if (replaced)
        *replaced = any;
    return out;
}

std::string toUtf8(std::string_view bytes, bool* wasLegacy)
{
    if (isValidUtf8(bytes)) {
        if (wasLegacy)
            *wasLegacy = false;
        return std::string(bytes);
    }
    if (wasLegacy)
        *wasLegacy = true;
    std::string out;
    out.reserve(bytes.size() * 3);
    for (unsigned char b : bytes) {
        if (b < 0x80)
            out.push_back(static_cast<char>(b));
        else if (b >= 0xA1 && b <= 0xFB)
            appendUtf8(out, static_cast<char32_t>(0x0E01 + (b - 0xA1)));
        else
            appendUtf8(out, U'\uFFFD');
    }
    return out;
}

std::string extractPlain(std::string_view bytes)
{
    auto text = toUtf8(bytes);
    if (text.rfind("\xEF\xBB\xBF", 0) == 0)
        text.erase(0, 3);
    return text;
}

std::string extractCsv(std::string_view bytes)
{
    const auto text = extractPlain(bytes);
    std::string out;
    std::string cell;
    bool inQuotes = false;
    bool quotedCell = false;

    auto flushCell = [&] {
        std::size_t b = 0, e = cell.size();
        if (!quotedCell) {
            while (b < e && (cell[b] == ' ' || cell[b] == '\t'))
                ++b;
            while (e > b && (cell[e - 1] == ' ' || cell[e - 1] == '\t'))
                --e;
        }
        if (e > b) {
            // A quoted cell may span lines; keep it on one output line.
            std::string value = cell.substr(b, e - b);
            for (auto& c : value) {
                if (c == '\n' || c == '\r')
                    c = ' ';
            }
            if (!out.empty())
                out.push_back('\n');
            out += value;
        }
        cell.clear();
        quotedCell = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (inQuotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    inQuotes = false;
                }
            } else {
                cell.push_back(c);
            }
            continue;
        }
        if (c == '"' && cell.find_first_not_of(" \t") == std::string::npos) {
            cell.clear();
            inQuotes = true;
            quotedCell = true;
        } else if (c == ',' || c == ';' || c == '\t') {
            flushCell();
        } else if (c == '\n') {
            flushCell();
        } else if (c == '\r') {
            // part of CRLF
        } else {
            cell.push_back(c);
        }
    }
    flushCell();
    return out;
}

std::string extractHtml(std::string_view bytes)
{
    const auto text = extractPlain(bytes);
    const auto lowered = lowerAscii(text);
    static const std::unordered_set<std::string> kBreaking{
        "br", "p", "div", "tr", "td", "th", "li", "ul", "ol", "table", "tbody", "thead", "h1", "h2", "h3",
        "h4", "h5", "h6", "section", "article", "header", "footer", "pre", "blockquote", "dt", "dd", "hr"};

    std::string raw;
    raw.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '<') {
            raw.push_back(text[i++]);
            continue;
        }
        if (lowered.compare(i, 4, "<!--") == 0) {
            auto end = lowered.find("-->", i + 4);
            i = end == std::string::npos ? text.size() : end + 3;
            continue;
        }
        auto close = text.find('>', i);
        if (close == std::string::npos) {
            raw.append(text.substr(i));
            break;
        }
        std::size_t n = i + 1;
        if (n < text.size() && text[n] == '/')
            ++n;
        std::size_t nameEnd = n;
        while (nameEnd < close && std::isalnum(static_cast<unsigned char>(text[nameEnd])))
            ++nameEnd;
        const auto name = lowered.substr(n, nameEnd - n);
        const bool closing = text[i + 1] == '/';
        i = close + 1;
        if (!closing && (name == "script" || name == "style")) {
            auto end = lowered.find("</" + name, i);
            if (end == std::string::npos) {
                i = text.size();
            } else {
                auto endClose = text.find('>', end);
                i = endClose == std::string::npos ? text.size() : endClose + 1;
            }
            continue;
        }
        if (kBreaking.count(name))
            raw.push_back('\n');
    }

    // Entities.
    std::string out;
    out.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
        if (raw[k] != '&') {
            out.push_back(raw[k]);
            continue;
        }
        auto semi = raw.find(';', k);
        if (semi == std::string::npos || semi - k > 10) {
            out.push_back('&');
            continue;
        }
        const auto ent = raw.substr(k + 1, semi - k - 1);
        std::optional<char32_t> cp;
        if (ent == "amp")
            cp = U'&';
        else if (ent == "lt")
            cp = U'<';
        else if (ent == "gt")
            cp = U'>';
        else if (ent == "quot")
            cp = U'"';
        else if (ent == "apos")
            cp = U'\'';
        else if (ent == "nbsp")
            cp = U' ';
        else if (ent.size() > 1 && ent[0] == '#') {
            try {
                unsigned long v = (ent[1] == 'x' || ent[1] == 'X') ? std::stoul(ent.substr(2), nullptr, 16)
                                                                   : std::stoul(ent.substr(1), nullptr, 10);
                if (v > 0 && v <= 0x10FFFF && !(v >= 0xD800 && v <= 0xDFFF))
                    cp = static_cast<char32_t>(v);
            } catch (const std::exception&) {
            }
        }
        if (!cp) {
            out.push_back('&');
            continue;
        }
        appendUtf8(out, *cp);
        k = semi;
    }
    return out;
}

std::string mergeLines(const std::vector<TextSegment>& segments)
{
    std::unordered_set<std::string> seen;
    std::string merged;
    for (const auto& seg : segments) {
        std::istringstream in(seg.text);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos)
                continue;
            if (!seen.insert(line).second)
                continue;
            if (!merged.empty())
                merged.push_back('\n');
            merged += line;
        }
    }
    return merged;
}

ExternalOutput run_external(const ExtractorSpec& spec, const std::filesystem::path& input)
{
    spec.check();
    if (spec.kind != ExtractorSpec::Kind::External)
        throw std::invalid_argument("run_external needs an external extractor");

    auto args = splitCommand(spec.command);
    for (auto& a : args)
        a = replaceAll(a, "{input}", input.string());
    if (args.empty())
        throw ExtractionError(spec.name + ": empty command");

    Pipe out, err, status;
    const pid_t pid = ::fork();
    if (pid < 0)
        throw ExtractionError(spec.name + ": fork failed: " + std::strerror(errno));
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(out.fds[1], STDOUT_FILENO);
        ::dup2(err.fds[1], STDERR_FILENO);
        int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0)
            ::dup2(devnull, STDIN_FILENO);
        std::vector<char*> argv;
        for (auto& a : args)
            argv.push_back(a.data());
        argv.push_back(nullptr);
        ::execvp(argv[0], argv.data());
        int e = errno;
        [[maybe_unused]] auto w = ::write(status.fds[1], &e, sizeof e);
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    out.closeWrite();
    err.closeWrite();
    status.closeWrite();

    int execErrno = 0;
    if (::read(status.fds[0], &execErrno, sizeof execErrno) == static_cast<ssize_t>(sizeof execErrno)) {
        ::waitpid(pid, nullptr, 0);
        throw ExtractionError(spec.name + ": cannot start '" + args[0] + "': " + std::strerror(execErrno));
    }

    std::string stdoutText, stderrText;
    const auto deadline = std::chrono::steady_clock::now() + spec.timeout;
    bool timedOut = false;
    std::array<pollfd, 2> fds{pollfd{out.fds[0], POLLIN, 0}, pollfd{err.fds[0], POLLIN, 0}};
    int open = 2;
    std::array<char, 65536> buf{};
    while (open > 0) {
        const auto remaining =
            std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now()).count();
        if (remaining <= 0) {
            timedOut = true;
            break;
        }
        int rc = ::poll(fds.data(), fds.size(), static_cast<int>(std::min<long long>(remaining, 1000)));
        if (rc < 0) {
            if (errno == EINTR)
                continue;
            break;
        }
        for (std::size_t k = 0; k < fds.size(); ++k) {
            if (fds[k].fd < 0 || !(fds[k].revents & (POLLIN | POLLHUP | POLLERR)))
                continue;
            auto n = ::read(fds[k].fd, buf.data(), buf.size());
            if (n <= 0) {
                fds[k].fd = -1;
                --open;
                continue;
            }
            auto& sink = k == 0 ? stdoutText : stderrText;
            const auto cap = k == 0 ? kMaxStdout : kMaxStderr;
            if (sink.size() < cap)
                sink.append(buf.data(), std::min<std::size_t>(static_cast<std::size_t>(n), cap - sink.size()));
        }
    }

    int wstatus = 0;
    if (timedOut) {
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &wstatus, 0);
        throw ExtractionError(spec.name + ": timed out after " + std::to_string(spec.timeout.count()) + " ms");
    }
    ::waitpid(pid, &wstatus, 0);
    if (!WIFEXITED(wstatus) || WEXITSTATUS(wstatus) != 0) {
        std::string how = WIFEXITED(wstatus) ? "exit status " + std::to_string(WEXITSTATUS(wstatus))
                                             : "signal " + std::to_string(WTERMSIG(wstatus));
        while (!stderrText.empty() && (stderrText.back() == '\n' || stderrText.back() == '\r'))
            stderrText.pop_back();
        throw ExtractionError(spec.name + ": " + how + (stderrText.empty() ? "" : ": " + sanitizeUtf8(stderrText)));
    }

    ExternalOutput result;
    result.text = sanitizeUtf8(stdoutText, &result.invalid_utf8);
    return result;
}

ExtractedText extract_text(std::string_view bytes,
                           std::string_view declared_type,
                           const std::vector<ExtractorSpec>& extractors,
                           std::string object_digest)
{
    ExtractedText result;
    result.object_digest = std::move(object_digest);
    const std::string type(declared_type);

    std::optional<StagedFile> staged;
    std::size_t applicable = 0;
    for (const auto& spec : extractors) {
        if (!spec.applicable_types.count(type))
            continue;
        ++applicable;
        try {
            TextSegment seg;
            seg.extractor = spec.name;
            switch (spec.kind) {
            case ExtractorSpec::Kind::Plain:
                seg.text = extractPlain(bytes);
                break;
            case ExtractorSpec::Kind::Csv:
                seg.text = extractCsv(bytes);
                break;
            case ExtractorSpec::Kind::Html:
                seg.text = extractHtml(bytes);
                break;
            case ExtractorSpec::Kind::External: {
                if (!staged)
                    staged.emplace(bytes, type);
                auto ext = run_external(spec, staged->path());
                seg.text = std::move(ext.text);
                seg.invalid_utf8 = ext.invalid_utf8;
                break;
            }
            }
            result.segments.push_back(std::move(seg));
        } catch (const std::exception& e) {
            result.failures.push_back({spec.name, e.what()});
        }
    }

    if (applicable == 0)
        throw UnsupportedTypeError("no extractor handles type '" + type + "'");
    if (result.segments.empty())
        throw ExtractionError("all " + std::to_string(applicable) + " extractors failed for type '" + type + "'",
                              result.failures);
    result.merged = mergeLines(result.segments);
    return result;
}

std::vector<ExtractorSpec> defaultExtractors()
{
    using K = ExtractorSpec::Kind;
    return {
        ExtractorSpec::builtin(K::Plain, "plain", {"txt"}),
        ExtractorSpec::builtin(K::Csv, "csv", {"csv"}),
        ExtractorSpec::builtin(K::Html, "html", {"html"}),
    };
}

std::vector<ExtractorSpec> parseExtractorConfig(std::string_view json)
{
    std::vector<ExtractorSpec> out;
    try {
        auto j = nlohmann::json::parse(json);
        for (const auto& e : j) {
            ExtractorSpec s;
            s.name = e.at("name").get<std::string>();
            const auto kind = e.at("kind").get<std::string>();
            if (kind == "plain")
                s.kind = ExtractorSpec::Kind::Plain;
            else if (kind == "csv")
                s.kind = ExtractorSpec::Kind::Csv;
            else if (kind == "html")
                s.kind = ExtractorSpec::Kind::Html;
            else if (kind == "external")
                s.kind = ExtractorSpec::Kind::External;
            else
                throw std::invalid_argument("unknown extractor kind '" + kind + "'");
            s.command = e.value("command", "");
            s.applicable_types = e.at("types").get<std::set<std::string>>();
            s.timeout = Millis(e.value("timeout_ms", 60000));
            s.check();
            out.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("invalid extractor config: ") + e.what());
    }
    return out;
}

std::vector<ExtractorSpec> loadExtractorConfig(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::invalid_argument("cannot open extractor config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parseExtractorConfig(buf.str());
}

}  // namespace idexpose
