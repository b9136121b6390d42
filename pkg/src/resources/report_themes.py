"""
Report themes for rendered computation reports
Provides the CSS wrapped around the HTML produced from markdown reports
"""

from pygments.formatters import HtmlFormatter


class ReportThemes:
    """Collection of CSS themes for HTML reports"""

    @staticmethod
    def get_base_styles():
        """Common base styles used by all themes"""
        return """
            body {
                font-family: -apple-system, BlinkMacSystemFont, 'Segoe UI', Roboto, 'Helvetica Neue', Arial, sans-serif;
                line-height: 1.5;
                margin: 0 auto;
                max-width: 960px;
                padding: 24px;
            }

            h1, h2 {
                font-weight: 600;
                line-height: 1.25;
                margin: 24px 0 12px 0;
            }

            table {
                border-collapse: collapse;
                margin: 16px 0;
                width: 100%;
            }

            th, td {
                border: 1px solid;
                padding: 6px 12px;
                text-align: left;
            }

            td code, th code {
                font-family: 'Consolas', 'Monaco', 'Courier New', monospace;
                font-size: 0.9em;
            }

            .highlight pre {
                border-radius: 6px;
                overflow-x: auto;
                padding: 12px;
            }
        """

    @staticmethod
    def get_dark_theme():
        return ReportThemes.get_base_styles() + """
            body { color: #d4d4d4; background-color: #1e1e1e; }
            h1, h2 { color: #569cd6; }
            th { background-color: #2d2d2d; }
            th, td { border-color: #3c3c3c; }
            tr:nth-child(even) { background-color: #252526; }
            code { color: #ce9178; }
            .highlight pre { background-color: #2d2d2d; }
        """ + HtmlFormatter(style="monokai").get_style_defs(".highlight")

    @staticmethod
    def get_light_theme():
        return ReportThemes.get_base_styles() + """
            body { color: #24292e; background-color: #ffffff; }
            h1, h2 { color: #1f2328; }
            th { background-color: #f6f8fa; }
            th, td { border-color: #d0d7de; }
            tr:nth-child(even) { background-color: #fafbfc; }
            code { color: #d73a49; }
            .highlight pre { background-color: #f6f8fa; }
        """ + HtmlFormatter(style="default").get_style_defs(".highlight")

    @staticmethod
    def get_theme(theme_name: str) -> str:
        """Get a specific theme by name, falling back to light"""
        themes = {
            'dark': ReportThemes.get_dark_theme,
            'light': ReportThemes.get_light_theme,
        }
        return themes.get(theme_name, ReportThemes.get_light_theme)()

    @staticmethod
    def get_available_themes() -> list:
        return ['light', 'dark']
